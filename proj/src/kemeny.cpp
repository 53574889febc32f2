#include "rankmetrics/kemeny.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "rankmetrics/error.hpp"
#include "rankmetrics/random.hpp"

namespace rankmetrics {

namespace {

std::vector<std::vector<int>> to_integer_ranks(const std::vector<RankVector>& members) {
  std::vector<std::vector<int>> out;
  out.reserve(members.size());
  for (const auto& m : members) {
    std::vector<int> ranks;
    ranks.reserve(m.size());
    for (double r : m.ranks) {
      if (r != static_cast<double>(static_cast<int>(r))) {
        throw Error(ErrorCode::InvalidArgument, "family members must be tie-free permutations");
      }
      ranks.push_back(static_cast<int>(r));
    }
    out.push_back(std::move(ranks));
  }
  return out;
}

RankVector as_rank_vector(const std::vector<int>& ranks) {
  RankVector out;
  out.ranks.assign(ranks.begin(), ranks.end());
  return out;
}

// Depth-first search that assigns positions to items 0, 1, ... in turn,
// trying positions in ascending order. Solutions are therefore reached in
// lexicographic order of their rank vectors, and a strict improvement test
// keeps the first (smallest) of any co-optimal set.
class KemenySearch {
 public:
  KemenySearch(const RankingFamily& family, std::int64_t upper_bound)
      : family_(family), n_(family.items()), best_cost_(upper_bound) {
    position_.assign(n_, -1);
    used_.assign(n_, false);
  }

  void run() { descend(0); }

  std::int64_t best_cost() const { return best_cost_; }
  const std::vector<int>& best() const { return best_; }

 private:
  // Cost of every pair whose relative order is fixed by the partial
  // assignment, plus the cheaper orientation of every other pair.
  std::int64_t lower_bound(std::size_t assigned) const {
    int min_free = static_cast<int>(n_);
    int max_free = -1;
    for (std::size_t p = 0; p < n_; ++p) {
      if (!used_[p]) {
        min_free = std::min(min_free, static_cast<int>(p));
        max_free = std::max(max_free, static_cast<int>(p));
      }
    }
    std::int64_t bound = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const int i_first = family_.prefer(j, i);  // cost when i is placed ahead of j
        const int j_first = family_.prefer(i, j);
        if (i < assigned && j < assigned) {
          bound += position_[i] < position_[j] ? i_first : j_first;
        } else if (i < assigned && position_[i] < min_free) {
          bound += i_first;
        } else if (i < assigned && position_[i] > max_free) {
          bound += j_first;
        } else {
          bound += std::min(i_first, j_first);
        }
      }
    }
    return bound;
  }

  void descend(std::size_t item) {
    if (item == n_) {
      const std::int64_t cost = lower_bound(n_);
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_.assign(n_, 0);
        for (std::size_t i = 0; i < n_; ++i) best_[i] = position_[i] + 1;
      }
      return;
    }
    for (std::size_t p = 0; p < n_; ++p) {
      if (used_[p]) continue;
      used_[p] = true;
      position_[item] = static_cast<int>(p);
      if (lower_bound(item + 1) < best_cost_) descend(item + 1);
      position_[item] = -1;
      used_[p] = false;
    }
  }

  const RankingFamily& family_;
  std::size_t n_;
  std::int64_t best_cost_;
  std::vector<int> best_;
  std::vector<int> position_;
  std::vector<bool> used_;
};

std::vector<int> random_permutation(Rng& rng, std::size_t n) {
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1);
  rng.shuffle(std::span<int>(ranks));
  return ranks;
}

}  // namespace

RankingFamily::RankingFamily(std::vector<std::vector<int>> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::InvalidArgument, "ranking family needs at least one member");
  const std::size_t n = members_.front().size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "rankings must have at least one item");
  for (const auto& m : members_) {
    if (m.size() != n) throw Error(ErrorCode::LengthMismatch, "family members differ in length");
    std::vector<bool> seen(n, false);
    for (int r : m) {
      if (r < 1 || static_cast<std::size_t>(r) > n || seen[static_cast<std::size_t>(r - 1)]) {
        throw Error(ErrorCode::InvalidArgument, "family member is not a permutation of 1..L");
      }
      seen[static_cast<std::size_t>(r - 1)] = true;
    }
  }
  preference_.assign(n * n, 0);
  for (const auto& m : members_) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (m[i] < m[j]) ++preference_[i * n + j];
      }
    }
  }
}

RankingFamily::RankingFamily(const std::vector<RankVector>& members) : RankingFamily(to_integer_ranks(members)) {}

RankVector RankingFamily::member(std::size_t i) const { return as_rank_vector(members_.at(i)); }

std::int64_t family_cost(const RankVector& candidate, const RankingFamily& family) {
  if (candidate.size() != family.items()) {
    throw Error(ErrorCode::LengthMismatch, "candidate length differs from family");
  }
  if (candidate.size() < 2) return 0;
  std::int64_t cost = 0;
  for (const auto& m : family.members()) cost += kendall_distance(candidate, as_rank_vector(m));
  return cost;
}

ConsensusResult borda_consensus(const RankingFamily& family) {
  const std::size_t n = family.items();
  std::vector<std::int64_t> sums(n, 0);
  for (const auto& m : family.members()) {
    for (std::size_t i = 0; i < n; ++i) sums[i] += m[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sums[a] < sums[b]; });
  RankVector consensus;
  consensus.ranks.assign(n, 0.0);
  for (std::size_t pos = 0; pos < n; ++pos) consensus.ranks[order[pos]] = static_cast<double>(pos + 1);
  const std::int64_t cost = family_cost(consensus, family);
  return ConsensusResult{std::move(consensus), cost, ConsensusMethod::Borda};
}

ConsensusResult exact_kemeny(const RankingFamily& family) {
  if (family.items() > kMaxExactItems) {
    throw Error(ErrorCode::InstanceTooLarge, "exact Kemeny search is capped at " + std::to_string(kMaxExactItems) +
                                                 " items, got " + std::to_string(family.items()));
  }
  // Borda's cost bounds the optimum; +1 lets the search still find a
  // lexicographically smaller solution of equal cost.
  const ConsensusResult borda = borda_consensus(family);
  KemenySearch search(family, borda.cost + 1);
  search.run();
  return ConsensusResult{as_rank_vector(search.best()), search.best_cost(), ConsensusMethod::Exact};
}

ApproximationOutcome approximation_ratio(const RankingFamily& family) {
  ApproximationOutcome out;
  out.exact_cost = exact_kemeny(family).cost;
  out.borda_cost = borda_consensus(family).cost;
  if (out.exact_cost == 0) {
    out.exact_zero = true;
    out.ratio = out.borda_cost == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    out.ratio = static_cast<double>(out.borda_cost) / static_cast<double>(out.exact_cost);
  }
  return out;
}

KemenyAuditReport run_kemeny_audit(const KemenyAuditConfig& config) {
  if (config.max_voters < 1 || config.max_items < 2 || config.max_items > kMaxExactItems) {
    throw Error(ErrorCode::InvalidArgument, "audit needs max_voters >= 1 and 2 <= max_items <= " +
                                                std::to_string(kMaxExactItems));
  }
  KemenyAuditReport report;
  report.config = config;
  Rng rng(config.seed);
  double ratio_sum = 0.0;
  std::size_t ratio_count = 0;
  for (std::size_t sample = 0; sample < config.samples; ++sample) {
    const std::size_t voters = 1 + rng.uniform_index(config.max_voters);
    const std::size_t items = 2 + rng.uniform_index(config.max_items - 1);
    std::vector<std::vector<int>> members;
    for (std::size_t v = 0; v < voters; ++v) members.push_back(random_permutation(rng, items));
    const RankingFamily family(members);
    const ApproximationOutcome outcome = approximation_ratio(family);
    if (outcome.borda_cost == outcome.exact_cost) ++report.borda_optimal_count;
    bool violated = false;
    if (outcome.exact_zero) {
      ++report.exact_zero_count;
      violated = outcome.borda_cost != 0;
    } else {
      report.max_ratio = std::max(report.max_ratio, outcome.ratio);
      ratio_sum += outcome.ratio;
      ++ratio_count;
      violated = static_cast<double>(outcome.borda_cost) > config.bound * static_cast<double>(outcome.exact_cost);
    }
    if (violated) report.violations.push_back(KemenyAuditViolation{sample, std::move(members), outcome});
  }
  report.mean_ratio = ratio_count > 0 ? ratio_sum / static_cast<double>(ratio_count) : 1.0;
  return report;
}

}  // namespace rankmetrics
