#include "adpqe/pool.hpp"

#include <functional>
#include <set>

#include "adpqe/errors.hpp"
#include "adpqe/hamiltonian.hpp"

namespace adpqe {
namespace {

int alpha_count(const std::vector<int>& so) {
  int n = 0;
  for (int i : so) n += (i & 1) == 0;
  return n;
}

// Calls f(combo) for every k-subset of items in lexicographic order.
void for_each_combination(const std::vector<int>& items, int k,
                          const std::function<void(const std::vector<int>&)>& f) {
  const int n = static_cast<int>(items.size());
  if (k > n) return;
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  std::vector<int> combo(k);
  while (true) {
    for (int i = 0; i < k; ++i) combo[i] = items[pos[i]];
    f(combo);
    int i = k - 1;
    while (i >= 0 && pos[i] == n - k + i) --i;
    if (i < 0) return;
    ++pos[i];
    for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

}  // namespace

std::optional<std::size_t> OperatorPool::find(const Excitation& e) const {
  const auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t OperatorPool::count_of_rank(int rank) const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.rank() == rank;
  return n;
}

OperatorPool generate_pool(const ReferenceData& ref, int rank_cap) {
  if (rank_cap < 1 || rank_cap > kMaxPoolRank) {
    throw RangeError("pool rank cap " + std::to_string(rank_cap) + " outside [1, " +
                     std::to_string(kMaxPoolRank) + "]");
  }
  OperatorPool pool;
  pool.rank_cap_ = rank_cap;
  const Determinant phi0{ref.determinant_bits()};
  for (int k = 1; k <= rank_cap; ++k) {
    for_each_combination(ref.occupied, k, [&](const std::vector<int>& holes) {
      const int holes_alpha = alpha_count(holes);
      for_each_combination(ref.virtuals, k, [&](const std::vector<int>& particles) {
        if (alpha_count(particles) != holes_alpha) return;
        Excitation e(holes, particles);
        const auto target = apply_tau(e, phi0);
        if (!target) {
          throw ConsistencyError("excitation " + e.to_string() + " does not connect to reference");
        }
        pool.index_.emplace(e, pool.entries_.size());
        pool.targets_.push_back(*target);
        pool.entries_.push_back(std::move(e));
      });
    });
  }
  return pool;
}

std::vector<Excitation> complement(const OperatorPool& pool,
                                   std::span<const Excitation> selected) {
  std::vector<char> taken(pool.size(), 0);
  for (const auto& e : selected) {
    const auto i = pool.find(e);
    if (!i) throw ConsistencyError("selected excitation " + e.to_string() + " not in pool");
    taken[*i] = 1;
  }
  std::vector<Excitation> rest;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!taken[i]) rest.push_back(pool[i]);
  }
  return rest;
}

nlohmann::json excitation_to_json(const Excitation& e) {
  return {{"rank", e.rank()}, {"holes", e.holes}, {"particles", e.particles}};
}

nlohmann::json pool_to_json(const OperatorPool& pool) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : pool.entries()) out.push_back(excitation_to_json(e));
  return out;
}

}  // namespace adpqe
