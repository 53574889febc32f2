#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankmetrics/ranking.hpp"
#include "rankmetrics/scoreset.hpp"

namespace rankmetrics {

// Symmetric M x M matrix of complementarity values, zero diagonal, humans
// ordered before automatic metrics.
struct ComplementarityMatrix {
  std::vector<std::string> metric_ids;
  std::vector<MetricKind> kinds;
  std::vector<double> values;  // row-major

  std::size_t size() const { return metric_ids.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
  std::size_t index_of(std::string_view id) const;
};

// Average normalized Kendall distance between the two metrics' rankings of
// systems, one ranking per utterance.
double pairwise_complementarity(const ScoreTensor& tensor, std::string_view m0, std::string_view m1);

// Mean pairwise complementarity between m0 and each metric in `others`.
double complementarity_vs_set(const ScoreTensor& tensor, std::string_view m0,
                              std::span<const std::string> others);

ComplementarityMatrix complementarity_matrix(const ScoreTensor& tensor);

struct GroupStat {
  double mean = 0.0;
  // Standard error of the mean; absent with a single pair.
  std::optional<double> std_error;
  std::vector<double> pairs;
};

struct GroupSummary {
  std::optional<GroupStat> human_human;
  std::optional<GroupStat> auto_auto;
  std::optional<GroupStat> cross;
};

// Groups the off-diagonal upper-triangle entries by kind pair. A group with no
// pair stays absent. Kinds are taken from the matrix itself.
GroupSummary group_summary(const ComplementarityMatrix& matrix);

// Same, with kinds looked up in `profiles` by id.
GroupSummary group_summary(const ComplementarityMatrix& matrix, std::span<const MetricProfile> profiles);

}  // namespace rankmetrics
