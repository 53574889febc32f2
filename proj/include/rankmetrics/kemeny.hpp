#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rankmetrics/ranking.hpp"

namespace rankmetrics {

// p >= 1 tie-free rankings of the same L items; each member is a permutation
// of {1..L} written as a rank vector.
class RankingFamily {
 public:
  explicit RankingFamily(std::vector<std::vector<int>> members);
  explicit RankingFamily(const std::vector<RankVector>& members);

  std::size_t voters() const { return members_.size(); }
  std::size_t items() const { return members_.front().size(); }
  const std::vector<std::vector<int>>& members() const { return members_; }
  RankVector member(std::size_t i) const;

  // prefer(i, j): number of members ranking item i strictly ahead of item j.
  int prefer(std::size_t i, std::size_t j) const { return preference_[i * items() + j]; }

 private:
  std::vector<std::vector<int>> members_;
  std::vector<int> preference_;
};

enum class ConsensusMethod { Exact, Borda };

struct ConsensusResult {
  RankVector consensus;
  std::int64_t cost = 0;
  ConsensusMethod method = ConsensusMethod::Exact;
};

inline constexpr std::size_t kMaxExactItems = 10;

// Sum of Kendall distances from `candidate` to every member.
std::int64_t family_cost(const RankVector& candidate, const RankingFamily& family);

// Global minimiser of family_cost by branch-and-bound. Co-optimal solutions
// resolve to the lexicographically smallest rank vector. Throws
// InstanceTooLarge above kMaxExactItems items.
ConsensusResult exact_kemeny(const RankingFamily& family);

// Items ordered by ascending rank sum; equal sums go to the lower index.
ConsensusResult borda_consensus(const RankingFamily& family);

struct ApproximationOutcome {
  std::int64_t exact_cost = 0;
  std::int64_t borda_cost = 0;
  // True when the exact optimum costs 0, where a ratio is undefined.
  bool exact_zero = false;
  // borda/exact; +inf if exact_zero and Borda is not also free; 1 when both are 0.
  double ratio = 1.0;
};

ApproximationOutcome approximation_ratio(const RankingFamily& family);

struct KemenyAuditConfig {
  std::size_t samples = 10000;
  std::size_t max_voters = 7;
  std::size_t max_items = 6;
  std::uint64_t seed = 0;
  double bound = 5.0;
};

struct KemenyAuditViolation {
  std::size_t sample = 0;
  std::vector<std::vector<int>> members;
  ApproximationOutcome outcome;
};

struct KemenyAuditReport {
  KemenyAuditConfig config;
  std::size_t exact_zero_count = 0;
  std::size_t borda_optimal_count = 0;
  double max_ratio = 1.0;
  // Mean over instances with a nonzero exact cost.
  double mean_ratio = 1.0;
  std::vector<KemenyAuditViolation> violations;
};

// Draws `samples` families with p in [1, max_voters] and L in [2, max_items]
// uniformly, and checks Borda against the exact optimum.
KemenyAuditReport run_kemeny_audit(const KemenyAuditConfig& config);

}  // namespace rankmetrics
