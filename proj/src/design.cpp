#include "rankmetrics/error.hpp"
#include "rankmetrics/prediction.hpp"
#include "rankmetrics/ranking.hpp"

namespace rankmetrics {

namespace {

// Column of values for one metric, rows in (system, utterance) order.
Eigen::VectorXd metric_column(const ScoreTensor& tensor, std::size_t metric, DesignMode mode) {
  const std::size_t n = tensor.num_systems();
  const std::size_t k = tensor.num_utterances();
  Eigen::VectorXd column(static_cast<Eigen::Index>(n * k));
  if (mode == DesignMode::RawScores) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t u = 0; u < k; ++u) column(static_cast<Eigen::Index>(s * k + u)) = tensor.at(metric, s, u);
    }
  } else {
    for (std::size_t u = 0; u < k; ++u) {
      const auto ranks = rank_slice(tensor.systems_on_utterance(metric, u));
      for (std::size_t s = 0; s < n; ++s) column(static_cast<Eigen::Index>(s * k + u)) = ranks.ranks[s];
    }
  }
  return column;
}

}  // namespace

std::string_view to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::AutoOnly: return "auto_only";
    case FeatureSet::HumanOnly: return "human_only";
    case FeatureSet::Both: return "both";
    case FeatureSet::Custom: return "custom";
  }
  return "custom";
}

std::string_view to_string(DesignMode mode) { return mode == DesignMode::RawScores ? "raw_scores" : "ranks"; }

std::string_view to_string(RegressorKind kind) { return kind == RegressorKind::Lasso ? "lasso" : "gbt"; }

RegressionDesign build_design(const ScoreTensor& tensor, std::string_view target, std::span<const std::string> feature_ids,
                              DesignMode mode) {
  const std::size_t t = tensor.metric_index(target);
  if (!tensor.metrics()[t].is_human()) {
    throw Error(ErrorCode::TargetNotHuman, "target '" + std::string(target) + "' is not a human metric");
  }
  if (feature_ids.empty()) throw Error(ErrorCode::NoFeatures, "no features selected for target '" + std::string(target) + "'");

  RegressionDesign design;
  design.target_id = std::string(target);
  design.mode = mode;
  const std::size_t rows = tensor.num_systems() * tensor.num_utterances();
  design.features.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(feature_ids.size()));
  for (std::size_t f = 0; f < feature_ids.size(); ++f) {
    if (feature_ids[f] == target) throw Error(ErrorCode::InvalidArgument, "target cannot be its own feature");
    design.features.col(static_cast<Eigen::Index>(f)) = metric_column(tensor, tensor.metric_index(feature_ids[f]), mode);
    design.feature_ids.push_back(feature_ids[f]);
  }
  design.target = metric_column(tensor, t, mode);
  design.row_keys.reserve(rows);
  for (const auto& system : tensor.systems()) {
    for (const auto& utterance : tensor.utterances()) design.row_keys.emplace_back(system, utterance);
  }
  return design;
}

RegressionDesign build_design(const ScoreTensor& tensor, std::string_view target, FeatureSet set, DesignMode mode) {
  const std::size_t t = tensor.metric_index(target);
  if (!tensor.metrics()[t].is_human()) {
    throw Error(ErrorCode::TargetNotHuman, "target '" + std::string(target) + "' is not a human metric");
  }
  std::vector<std::string> autos;
  std::vector<std::string> humans;
  for (const auto& m : tensor.metrics()) {
    if (m.id == target) continue;
    (m.is_human() ? humans : autos).push_back(m.id);
  }
  std::vector<std::string> ids;
  switch (set) {
    case FeatureSet::AutoOnly: ids = autos; break;
    case FeatureSet::HumanOnly: ids = humans; break;
    case FeatureSet::Both:
      ids = autos;
      ids.insert(ids.end(), humans.begin(), humans.end());
      break;
    case FeatureSet::Custom:
      throw Error(ErrorCode::InvalidArgument, "custom feature sets need an explicit id list");
  }
  if (ids.empty()) {
    throw Error(ErrorCode::NoFeatures, "feature set " + std::string(to_string(set)) + " is empty for target '" +
                                           std::string(target) + "'");
  }
  RegressionDesign design = build_design(tensor, target, ids, mode);
  design.feature_set = set;
  return design;
}

RegressionDesign take_rows(const RegressionDesign& design, std::span<const std::size_t> rows) {
  RegressionDesign out;
  out.target_id = design.target_id;
  out.feature_ids = design.feature_ids;
  out.feature_set = design.feature_set;
  out.mode = design.mode;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), design.features.cols());
  out.target.resize(static_cast<Eigen::Index>(rows.size()));
  out.row_keys.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(rows[i]);
    out.features.row(static_cast<Eigen::Index>(i)) = design.features.row(r);
    out.target(static_cast<Eigen::Index>(i)) = design.target(r);
    out.row_keys.push_back(design.row_keys[rows[i]]);
  }
  return out;
}

}  // namespace rankmetrics
