#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "adpqe/excitation.hpp"
#include "adpqe/state.hpp"
#include "json.hpp"

namespace adpqe {

struct ReferenceData;

// Every particle-number and Sz conserving particle-hole excitation of rank
// 1..rank_cap out of the reference, ordered by rank, then holes, then
// particles.
class OperatorPool {
 public:
  OperatorPool() = default;

  int rank_cap() const { return rank_cap_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Excitation>& entries() const { return entries_; }
  const Excitation& operator[](std::size_t i) const { return entries_[i]; }

  std::optional<std::size_t> find(const Excitation& e) const;

  // tau_mu |Phi_0> for entry mu.
  const SignedDeterminant& target(std::size_t i) const { return targets_[i]; }

  std::size_t count_of_rank(int rank) const;

 private:
  friend OperatorPool generate_pool(const ReferenceData& ref, int rank_cap);

  int rank_cap_ = 0;
  std::vector<Excitation> entries_;
  std::vector<SignedDeterminant> targets_;
  std::map<Excitation, std::size_t> index_;
};

inline constexpr int kMaxPoolRank = 4;

// Throws RangeError unless 1 <= rank_cap <= kMaxPoolRank.
OperatorPool generate_pool(const ReferenceData& ref, int rank_cap);

// Pool entries not in `selected`, in pool order.  Throws ConsistencyError
// when a selected excitation is not in the pool.
std::vector<Excitation> complement(const OperatorPool& pool, std::span<const Excitation> selected);

nlohmann::json excitation_to_json(const Excitation& e);
nlohmann::json pool_to_json(const OperatorPool& pool);

}  // namespace adpqe
