#include "rankmetrics/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "rankmetrics/error.hpp"

namespace rankmetrics {

namespace {

void check_pair(const RankVector& a, const RankVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "rank vectors of length " + std::to_string(a.size()) + " and " +
                                               std::to_string(b.size()));
  }
  if (a.size() < 2) throw Error(ErrorCode::LengthMismatch, "Kendall distance needs at least 2 items");
}

// Counts inversions of `values` while merge-sorting it.
std::int64_t count_inversions(std::vector<double>& values, std::vector<double>& scratch, std::size_t lo,
                              std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t count = count_inversions(values, scratch, lo, mid) + count_inversions(values, scratch, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t out = lo;
  while (i < mid && j < hi) {
    if (values[j] < values[i]) {
      count += static_cast<std::int64_t>(mid - i);
      scratch[out++] = values[j++];
    } else {
      scratch[out++] = values[i++];
    }
  }
  while (i < mid) scratch[out++] = values[i++];
  while (j < hi) scratch[out++] = values[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            values.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

std::int64_t discordant_pairs_quadratic(const RankVector& a, const RankVector& b) {
  std::int64_t count = 0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((a.ranks[i] - a.ranks[j]) * (b.ranks[i] - b.ranks[j]) < 0) ++count;
    }
  }
  return count;
}

}  // namespace

bool RankVector::has_ties() const {
  std::vector<double> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

std::string_view to_string(Level level) { return level == Level::System ? "system" : "utterance"; }

RankVector rank_slice(std::span<const double> scores) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RankVector out;
  out.ranks.assign(n, 0.0);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    // Positions start+1 .. end share the average rank.
    const double mid_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t i = start; i < end; ++i) out.ranks[order[i]] = mid_rank;
    start = end;
  }
  return out;
}

BordaRepresentation system_representation(const ScoreTensor& tensor, std::string_view metric_id) {
  const std::size_t m = tensor.metric_index(metric_id);
  BordaRepresentation rep{std::vector<double>(tensor.num_systems(), 0.0), Level::System, std::string(metric_id)};
  for (std::size_t u = 0; u < tensor.num_utterances(); ++u) {
    const auto ranks = rank_slice(tensor.systems_on_utterance(m, u));
    for (std::size_t s = 0; s < ranks.size(); ++s) rep.values[s] += ranks.ranks[s];
  }
  return rep;
}

BordaRepresentation utterance_representation(const ScoreTensor& tensor, std::string_view metric_id) {
  const std::size_t m = tensor.metric_index(metric_id);
  BordaRepresentation rep{std::vector<double>(tensor.num_utterances(), 0.0), Level::Utterance,
                          std::string(metric_id)};
  for (std::size_t s = 0; s < tensor.num_systems(); ++s) {
    const auto ranks = rank_slice(tensor.utterances_of_system(m, s));
    for (std::size_t u = 0; u < ranks.size(); ++u) rep.values[u] += ranks.ranks[u];
  }
  return rep;
}

BordaRepresentation representation(const ScoreTensor& tensor, std::string_view metric_id, Level level) {
  return level == Level::System ? system_representation(tensor, metric_id)
                                : utterance_representation(tensor, metric_id);
}

std::int64_t kendall_distance(const RankVector& a, const RankVector& b) {
  check_pair(a, b);
  if (a.has_ties() || b.has_ties()) return discordant_pairs_quadratic(a, b);
  // Order items by a; the discordant pairs are then the inversions of b.
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a.ranks[i] < a.ranks[j]; });
  std::vector<double> sequence(n);
  for (std::size_t i = 0; i < n; ++i) sequence[i] = b.ranks[order[i]];
  std::vector<double> scratch(n);
  return count_inversions(sequence, scratch, 0, n);
}

double normalized_kendall(const RankVector& a, const RankVector& b) {
  const std::int64_t d = kendall_distance(a, b);
  const auto n = static_cast<double>(a.size());
  return static_cast<double>(d) / (n * (n - 1.0) / 2.0);
}

double kendall_tau(const RankVector& a, const RankVector& b) { return 1.0 - 2.0 * normalized_kendall(a, b); }

}  // namespace rankmetrics
