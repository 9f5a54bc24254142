#include "catch_amalgamated.hpp"

#include <numbers>
#include <random>

#include "adpqe/errors.hpp"
#include "adpqe/hamiltonian.hpp"
#include "adpqe/state.hpp"
#include "oracle.hpp"

using namespace adpqe;
using Catch::Matchers::WithinAbs;

namespace {

double distance(const StateVector& a, const oracle::Vector& b) {
  return (oracle::to_eigen(a) - b).cwiseAbs().maxCoeff();
}

double distance(const StateVector& a, const StateVector& b) {
  return (oracle::to_eigen(a) - oracle::to_eigen(b)).cwiseAbs().maxCoeff();
}

bool in_sector(const StateVector& v, int n_alpha, int n_beta, double tol) {
  for (std::uint64_t d = 0; d < v.size(); ++d) {
    const Determinant det{d};
    if ((det.n_alpha() != n_alpha || det.n_beta() != n_beta) && std::abs(v[d]) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("excitations validate and order their indices", "[state][excitation]") {
  const Excitation e({5, 1}, {6, 2});
  CHECK(e.holes == std::vector<int>{1, 5});
  CHECK(e.particles == std::vector<int>{2, 6});
  CHECK(e.to_string() == "1,5->2,6");
  CHECK(e.rank() == 2);
  CHECK_THROWS_AS(Excitation({0}, {1, 2}), ConfigurationError);
  CHECK_THROWS_AS(Excitation({0, 0}, {1, 2}), ConfigurationError);
  CHECK_THROWS_AS(Excitation({0}, {0}), ConfigurationError);
  CHECK(Excitation({0}, {2}) < Excitation({0, 1}, {2, 3}));
}

TEST_CASE("tau acts with the lower-mode parity sign", "[state][oracle]") {
  const Excitation e({0}, {2});
  const auto t = apply_tau(e, Determinant{0b0011});
  REQUIRE(t);
  CHECK(t->det.bits == 0b0110);
  const auto m = oracle::tau_matrix(e, 4);
  CHECK(m(0b0110, 0b0011).real() == t->sign);
  CHECK_FALSE(apply_tau(e, Determinant{0b0100}));

  const auto back = apply_tau_dagger(e, t->det);
  REQUIRE(back);
  CHECK(back->det.bits == 0b0011);
  CHECK(back->sign == t->sign);
}

TEST_CASE("tau signs agree with the dense ladder product", "[state][oracle]") {
  std::mt19937_64 rng(1);
  const int n = 8;
  for (int rank = 1; rank <= 4; ++rank) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto e = oracle::random_excitation(n, rank, rng);
      const auto m = oracle::tau_matrix(e, n);
      for (std::uint64_t d = 0; d < (1u << n); ++d) {
        const auto t = apply_tau(e, Determinant{d});
        const auto col = m.col(d);
        if (!t) {
          REQUIRE(col.cwiseAbs().maxCoeff() == 0.0);
        } else {
          REQUIRE(col(t->det.bits).real() == t->sign);
        }
      }
    }
  }
}

TEST_CASE("HF double excitation of H4 matches the dense oracle", "[state][oracle]") {
  const auto ref = hf_reference(oracle::load_fixture("h4_r1.00"));
  const Excitation e({2, 3}, {4, 5});
  const auto d0 = ref.determinant_bits();
  const auto t = apply_tau(e, Determinant{d0});
  REQUIRE(t);
  CHECK(oracle::tau_matrix(e, 8)(t->det.bits, d0).real() == t->sign);
}

TEST_CASE("closed-form exponential matches the matrix exponential", "[state][oracle]") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  const int n = 8;
  for (int rank = 1; rank <= 4; ++rank) {
    for (int trial = 0; trial < 3; ++trial) {
      const AnsatzLayer layer{oracle::random_excitation(n, rank, rng), angle(rng)};
      const auto v = oracle::random_state(n, rng);
      const oracle::Vector expected =
          oracle::expm(layer.theta * oracle::kappa_matrix(layer.excitation, n)) *
          oracle::to_eigen(v);
      CHECK(distance(apply_exp_kappa(layer, v), expected) < 1e-10);
    }
  }
}

TEST_CASE("special angles", "[state]") {
  const Excitation e({0}, {2});
  const auto phi0 = StateVector::basis(4, Determinant{0b0011});
  SECTION("zero angle is the identity") {
    CHECK(distance(apply_exp_kappa({e, 0.0}, phi0), phi0) == 0.0);
  }
  SECTION("quarter turn gives an equal superposition") {
    const auto w = apply_exp_kappa({e, std::numbers::pi / 4}, phi0);
    const auto t = apply_tau(e, Determinant{0b0011});
    CHECK_THAT(project(Determinant{0b0011}, w).real(), WithinAbs(1 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(project(t->det, w).real(), WithinAbs(t->sign / std::sqrt(2.0), 1e-15));
  }
  SECTION("projections of basis states") {
    CHECK(project(Determinant{0b0011}, phi0) == cplx{1.0});
    CHECK(project(Determinant{0b0101}, phi0) == cplx{});
  }
}

TEST_CASE("ansatz ordering", "[state][oracle]") {
  std::mt19937_64 rng(4);
  const int n = 8;
  const auto v = oracle::random_sector_state(n, 2, 2, rng);
  SECTION("empty ansatz") { CHECK(distance(apply_ansatz({}, v), v) == 0.0); }
  SECTION("disjoint layers commute") {
    const std::vector<AnsatzLayer> ab{{Excitation({0}, {2}), 0.3}, {Excitation({5}, {7}), -0.7}};
    const std::vector<AnsatzLayer> ba{ab[1], ab[0]};
    CHECK(distance(apply_ansatz(ab, v), apply_ansatz(ba, v)) < 1e-12);
  }
  SECTION("overlapping layers do not commute, and layer 0 acts first") {
    const std::vector<AnsatzLayer> ab{{Excitation({0}, {2}), 0.4},
                                      {Excitation({0, 1}, {2, 3}), 0.9}};
    const std::vector<AnsatzLayer> ba{ab[1], ab[0]};
    const auto k0 = oracle::kappa_matrix(ab[0].excitation, n);
    const auto k1 = oracle::kappa_matrix(ab[1].excitation, n);
    const oracle::Vector x = oracle::to_eigen(v);
    const oracle::Vector want_ab = oracle::expm(0.9 * k1) * (oracle::expm(0.4 * k0) * x);
    const oracle::Vector want_ba = oracle::expm(0.4 * k0) * (oracle::expm(0.9 * k1) * x);
    CHECK(distance(apply_ansatz(ab, v), want_ab) < 1e-10);
    CHECK(distance(apply_ansatz(ba, v), want_ba) < 1e-10);
    CHECK(distance(apply_ansatz(ab, v), apply_ansatz(ba, v)) > 1e-3);
    CHECK(distance(apply_ansatz_adjoint(ab, apply_ansatz(ab, v)), v) < 1e-12);
  }
}

TEST_CASE("unitarity, inverse and sector preservation", "[state]") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> rank(1, 4);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const int n = 10;
  for (int trial = 0; trial < 200; ++trial) {
    const AnsatzLayer layer{oracle::random_excitation(n, rank(rng), rng), angle(rng)};
    const auto v = oracle::random_sector_state(n, 3, 2, rng);
    const auto w = apply_exp_kappa(layer, v);
    REQUIRE_THAT(w.norm(), WithinAbs(v.norm(), 1e-12));
    REQUIRE(in_sector(w, 3, 2, 1e-12));
    REQUIRE(distance(apply_exp_kappa({layer.excitation, -layer.theta}, w), v) < 1e-12);
  }
}

TEST_CASE("kappa cubed is minus kappa", "[state][oracle]") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> rank(1, 4);
  SECTION("dense matrices on eight modes") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto k = oracle::kappa_matrix(oracle::random_excitation(8, rank(rng), rng), 8);
      CHECK((k * k * k + k).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
  SECTION("sampled vectors on twelve modes") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto e = oracle::random_excitation(12, rank(rng), rng);
      const oracle::Vector x = oracle::to_eigen(oracle::random_state(12, rng));
      const oracle::Vector k1 = oracle::kappa_apply(e, 12, x);
      const oracle::Vector k3 = oracle::kappa_apply(e, 12, oracle::kappa_apply(e, 12, k1));
      CHECK((k3 + k1).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(distance(apply_kappa(e, oracle::from_eigen(x)), k1) < 1e-14);
    }
  }
  SECTION("vector oracle agrees with the dense oracle") {
    const auto e = oracle::random_excitation(8, 3, rng);
    const oracle::Vector x = oracle::to_eigen(oracle::random_state(8, rng));
    CHECK((oracle::kappa_apply(e, 8, x) - oracle::kappa_matrix(e, 8) * x).cwiseAbs().maxCoeff() <
          1e-14);
  }
}

TEST_CASE("invalid inputs", "[state]") {
  const auto v = StateVector::basis(4, Determinant{0b0011});
  CHECK_THROWS_AS(apply_exp_kappa({Excitation({0}, {6}), 0.1}, v), RangeError);
  CHECK_THROWS_AS(apply_exp_kappa({Excitation({0}, {2}), std::nan("")}, v), NumericalError);
  CHECK_THROWS_AS(StateVector(kMaxQubits + 1), RangeError);
}

TEST_CASE("exponential applications are counted", "[state]") {
  const auto before = exp_kappa_count();
  auto v = StateVector::basis(4, Determinant{0b0011});
  apply_exp_kappa_inplace({Excitation({0}, {2}), 0.1}, v);
  apply_ansatz(std::vector<AnsatzLayer>{{Excitation({0}, {2}), 0.1}, {Excitation({1}, {3}), 0.2}},
               v);
  CHECK(exp_kappa_count() - before == 3);
}
