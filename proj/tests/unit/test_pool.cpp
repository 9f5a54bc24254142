#include "catch_amalgamated.hpp"

#include <set>

#include "adpqe/errors.hpp"
#include "adpqe/hamiltonian.hpp"
#include "adpqe/pool.hpp"
#include "oracle.hpp"

using namespace adpqe;

namespace {

// Every (hole set, particle set) pair of equal size up to max_rank with
// matching alpha counts, found by scanning all subsets of the occupied and
// virtual orbitals.
std::set<Excitation> brute_force_pool(const ReferenceData& ref, int max_rank) {
  std::set<Excitation> out;
  const int no = static_cast<int>(ref.occupied.size());
  const int nv = static_cast<int>(ref.virtuals.size());
  for (std::uint32_t hm = 1; hm < (1u << no); ++hm) {
    for (std::uint32_t pm = 1; pm < (1u << nv); ++pm) {
      if (std::popcount(hm) != std::popcount(pm) || std::popcount(hm) > max_rank) continue;
      std::vector<int> holes, particles;
      int sz = 0;
      for (int k = 0; k < no; ++k)
        if (hm >> k & 1u) {
          holes.push_back(ref.occupied[k]);
          sz += ref.occupied[k] % 2 == 0 ? 1 : -1;
        }
      for (int k = 0; k < nv; ++k)
        if (pm >> k & 1u) {
          particles.push_back(ref.virtuals[k]);
          sz -= ref.virtuals[k] % 2 == 0 ? 1 : -1;
        }
      if (sz == 0) out.insert(Excitation(holes, particles));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("pool matches exhaustive enumeration", "[pool][oracle]") {
  for (std::string name : {"h2_r0.735", "h4_r1.00", "h6_r1.00"}) {
    const auto ref = hf_reference(oracle::load_fixture(name));
    for (int cap = 1; cap <= kMaxPoolRank; ++cap) {
      const auto pool = generate_pool(ref, cap);
      const auto expected = brute_force_pool(ref, cap);
      const std::set<Excitation> got(pool.entries().begin(), pool.entries().end());
      INFO(name << " rank " << cap);
      CHECK(got.size() == pool.size());
      CHECK(got == expected);
    }
  }
}

TEST_CASE("pool sizes by rank", "[pool]") {
  SECTION("two electrons in two orbitals") {
    const auto ref = hf_reference(oracle::load_fixture("h2_r0.735"));
    const auto pool = generate_pool(ref, 2);
    CHECK(pool.count_of_rank(1) == 2);
    CHECK(pool.count_of_rank(2) == 1);
  }
  SECTION("H4") {
    const auto pool = generate_pool(hf_reference(oracle::load_fixture("h4_r1.00")), 4);
    // Counts from the enumeration oracle above: 2*C(2,1)^2 singles, and so on.
    CHECK(pool.count_of_rank(1) == 8);
    CHECK(pool.count_of_rank(2) == 18);
    CHECK(pool.count_of_rank(3) == 8);
    CHECK(pool.count_of_rank(4) == 1);
    CHECK(pool.size() == 35);
  }
  SECTION("no virtual orbitals") {
    MolecularHamiltonian h(1, 2, 0, 0.0);
    CHECK(generate_pool(hf_reference(h), 1).empty());
  }
  SECTION("rank cap bounds") {
    const auto ref = hf_reference(oracle::load_fixture("h2_r0.735"));
    CHECK_THROWS_AS(generate_pool(ref, 0), RangeError);
    CHECK_THROWS_AS(generate_pool(ref, 5), RangeError);
  }
}

TEST_CASE("pool ordering and reference connection", "[pool]") {
  const auto ref = hf_reference(oracle::load_fixture("h4_r1.00"));
  const auto a = generate_pool(ref, 4);
  const auto b = generate_pool(ref, 4);
  CHECK(a.entries() == b.entries());
  CHECK(std::is_sorted(a.entries().begin(), a.entries().end()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto t = apply_tau(a[i], Determinant{ref.determinant_bits()});
    REQUIRE(t);
    CHECK(t->det == a.target(i).det);
    CHECK(t->sign == a.target(i).sign);
    CHECK(a.find(a[i]) == i);
  }
  CHECK_FALSE(a.find(Excitation({0}, {1})));
}

TEST_CASE("complement", "[pool]") {
  const auto pool = generate_pool(hf_reference(oracle::load_fixture("h4_r1.00")), 2);
  const auto& all = pool.entries();
  CHECK(complement(pool, {}) == all);
  CHECK(complement(pool, all).empty());
  const std::size_t half = all.size() / 2;
  const std::vector<Excitation> first(all.begin(), all.begin() + half);
  CHECK(complement(pool, first) == std::vector<Excitation>(all.begin() + half, all.end()));
  const std::vector<Excitation> foreign{Excitation({0}, {1})};
  CHECK_THROWS_AS(complement(pool, foreign), ConsistencyError);
}

TEST_CASE("pool serialises", "[pool]") {
  const auto pool = generate_pool(hf_reference(oracle::load_fixture("h2_r0.735")), 2);
  const auto j = pool_to_json(pool);
  REQUIRE(j.size() == pool.size());
  CHECK(j.back()["holes"] == std::vector<int>{0, 1});
  CHECK(j.back()["particles"] == std::vector<int>{2, 3});
  CHECK(j.back()["rank"] == 2);
}
