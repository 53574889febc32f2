#include "rankmetrics/complementarity.hpp"

#include <cmath>
#include <numeric>

#include "rankmetrics/error.hpp"

namespace rankmetrics {

namespace {

// Per-utterance system rankings of one metric.
std::vector<RankVector> utterance_rankings(const ScoreTensor& tensor, std::size_t metric) {
  std::vector<RankVector> out;
  out.reserve(tensor.num_utterances());
  for (std::size_t u = 0; u < tensor.num_utterances(); ++u) {
    out.push_back(rank_slice(tensor.systems_on_utterance(metric, u)));
  }
  return out;
}

double mean_distance(const std::vector<RankVector>& a, const std::vector<RankVector>& b) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) total += normalized_kendall(a[k], b[k]);
  return total / static_cast<double>(a.size());
}

void require_systems(const ScoreTensor& tensor) {
  if (tensor.num_systems() < 2) {
    throw Error(ErrorCode::DegenerateSystems, "complementarity needs at least 2 systems");
  }
}

GroupStat summarize(std::vector<double> pairs) {
  GroupStat stat;
  const auto n = static_cast<double>(pairs.size());
  stat.mean = std::accumulate(pairs.begin(), pairs.end(), 0.0) / n;
  if (pairs.size() > 1) {
    double ss = 0.0;
    for (double v : pairs) ss += (v - stat.mean) * (v - stat.mean);
    stat.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  stat.pairs = std::move(pairs);
  return stat;
}

}  // namespace

std::size_t ComplementarityMatrix::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < metric_ids.size(); ++i) {
    if (metric_ids[i] == id) return i;
  }
  throw Error(ErrorCode::UnknownMetric, "metric '" + std::string(id) + "' not in matrix");
}

double pairwise_complementarity(const ScoreTensor& tensor, std::string_view m0, std::string_view m1) {
  const std::size_t a = tensor.metric_index(m0);
  const std::size_t b = tensor.metric_index(m1);
  require_systems(tensor);
  return mean_distance(utterance_rankings(tensor, a), utterance_rankings(tensor, b));
}

double complementarity_vs_set(const ScoreTensor& tensor, std::string_view m0, std::span<const std::string> others) {
  tensor.metric_index(m0);
  if (others.empty()) throw Error(ErrorCode::EmptySet, "comparison set is empty");
  double total = 0.0;
  for (const auto& other : others) {
    if (other == m0) throw Error(ErrorCode::InvalidArgument, "metric '" + other + "' compared with itself");
    total += pairwise_complementarity(tensor, m0, other);
  }
  return total / static_cast<double>(others.size());
}

ComplementarityMatrix complementarity_matrix(const ScoreTensor& tensor) {
  require_systems(tensor);
  std::vector<std::size_t> order;
  for (std::size_t m = 0; m < tensor.num_metrics(); ++m) {
    if (tensor.metrics()[m].is_human()) order.push_back(m);
  }
  for (std::size_t m = 0; m < tensor.num_metrics(); ++m) {
    if (!tensor.metrics()[m].is_human()) order.push_back(m);
  }
  std::vector<std::vector<RankVector>> rankings;
  rankings.reserve(order.size());
  ComplementarityMatrix out;
  for (std::size_t m : order) {
    rankings.push_back(utterance_rankings(tensor, m));
    out.metric_ids.push_back(tensor.metrics()[m].id);
    out.kinds.push_back(tensor.metrics()[m].kind);
  }
  const std::size_t size = order.size();
  out.values.assign(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      const double c = mean_distance(rankings[i], rankings[j]);
      out.values[i * size + j] = c;
      out.values[j * size + i] = c;
    }
  }
  return out;
}

GroupSummary group_summary(const ComplementarityMatrix& matrix) {
  std::vector<double> hh;
  std::vector<double> aa;
  std::vector<double> cross;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      const bool hi = matrix.kinds[i] == MetricKind::Human;
      const bool hj = matrix.kinds[j] == MetricKind::Human;
      (hi && hj ? hh : (!hi && !hj ? aa : cross)).push_back(matrix(i, j));
    }
  }
  GroupSummary out;
  if (!hh.empty()) out.human_human = summarize(std::move(hh));
  if (!aa.empty()) out.auto_auto = summarize(std::move(aa));
  if (!cross.empty()) out.cross = summarize(std::move(cross));
  return out;
}

GroupSummary group_summary(const ComplementarityMatrix& matrix, std::span<const MetricProfile> profiles) {
  ComplementarityMatrix relabeled = matrix;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    bool found = false;
    for (const auto& p : profiles) {
      if (p.id == matrix.metric_ids[i]) {
        relabeled.kinds[i] = p.kind;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::UnknownMetric, "no profile for '" + matrix.metric_ids[i] + "'");
  }
  return group_summary(relabeled);
}

}  // namespace rankmetrics
