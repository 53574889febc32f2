#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rankmetrics/scoreset.hpp"

namespace rankmetrics {

// Ranks of L items, 1 = best. Tied items share the mid-rank, so the ranks
// always sum to L(L+1)/2.
struct RankVector {
  std::vector<double> ranks;

  std::size_t size() const { return ranks.size(); }
  bool has_ties() const;
  friend bool operator==(const RankVector&, const RankVector&) = default;
};

enum class Level { System, Utterance };
std::string_view to_string(Level level);

// Sum of per-slice ranks: over utterances (System level, length N) or over
// systems (Utterance level, length K).
struct BordaRepresentation {
  std::vector<double> values;
  Level level = Level::System;
  std::string metric_id;
};

// Highest score gets rank 1. Scores must already be oriented higher-is-better.
RankVector rank_slice(std::span<const double> scores);

BordaRepresentation system_representation(const ScoreTensor& tensor, std::string_view metric_id);
BordaRepresentation utterance_representation(const ScoreTensor& tensor, std::string_view metric_id);
BordaRepresentation representation(const ScoreTensor& tensor, std::string_view metric_id, Level level);

// Number of pairs ordered strictly oppositely. A pair tied in either vector is
// never discordant. Tie-free inputs use merge-sort inversion counting in
// O(L log L); otherwise all pairs are enumerated.
std::int64_t kendall_distance(const RankVector& a, const RankVector& b);

// kendall_distance / (L(L-1)/2).
double normalized_kendall(const RankVector& a, const RankVector& b);

// 1 - 2 * normalized_kendall. Ties are not corrected for (no tau-b).
double kendall_tau(const RankVector& a, const RankVector& b);

}  // namespace rankmetrics
