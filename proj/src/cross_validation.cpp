#include <algorithm>
#include <map>
#include <numeric>

#include "rankmetrics/error.hpp"
#include "rankmetrics/prediction.hpp"
#include "rankmetrics/random.hpp"
#include "rankmetrics/ranking.hpp"

namespace rankmetrics {

namespace {

std::vector<std::size_t> complement(std::size_t rows, const std::vector<std::size_t>& test) {
  std::vector<char> in_test(rows, 0);
  for (std::size_t r : test) in_test[r] = 1;
  std::vector<std::size_t> train;
  train.reserve(rows - test.size());
  for (std::size_t r = 0; r < rows; ++r) {
    if (!in_test[r]) train.push_back(r);
  }
  return train;
}

double test_tau(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
  const auto pred_ranks = rank_slice(std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())));
  const auto true_ranks = rank_slice(std::span<const double>(truth.data(), static_cast<std::size_t>(truth.size())));
  return kendall_tau(pred_ranks, true_ranks);
}

double mean_squared_error(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
  return (predicted - truth).squaredNorm() / static_cast<double>(truth.size());
}

}  // namespace

std::vector<std::vector<std::size_t>> fold_assignment(std::size_t rows, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorCode::InvalidArgument, "cross-validation needs at least 2 folds");
  if (rows < folds) {
    throw Error(ErrorCode::TooFewRows, std::to_string(rows) + " rows cannot fill " + std::to_string(folds) + " folds");
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> out(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t begin = f * rows / folds;
    const std::size_t end = (f + 1) * rows / folds;
    out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

Eigen::VectorXd fit_and_predict(const RegressionDesign& train, const Eigen::MatrixXd& test_features,
                                const RegressorConfig& config) {
  if (config.kind == RegressorKind::Lasso) {
    return lasso_fit(train, config.lasso_alpha, config.lasso).predict(test_features);
  }
  return gbt_fit(train, config.gbt).predict(test_features);
}

PredictionReport kfold_cv(const RegressionDesign& design, const RegressorConfig& config, std::size_t folds,
                          std::uint64_t seed) {
  if (design.rows() < 2 * folds) {
    throw Error(ErrorCode::TooFewRows, std::to_string(design.rows()) + " rows leave a test fold under 2 rows with " +
                                           std::to_string(folds) + " folds");
  }
  PredictionReport report;
  report.target_id = design.target_id;
  report.feature_set = design.feature_set;
  report.feature_ids = design.feature_ids;
  report.mode = design.mode;
  report.regressor = config.kind;
  report.folds = folds;
  report.seed = seed;
  for (const auto& test_rows : fold_assignment(design.rows(), folds, seed)) {
    const RegressionDesign train = take_rows(design, complement(design.rows(), test_rows));
    const RegressionDesign test = take_rows(design, test_rows);
    const Eigen::VectorXd predicted = fit_and_predict(train, test.features, config);
    report.fold_taus.push_back(test_tau(predicted, test.target));
  }
  report.mean_tau = std::accumulate(report.fold_taus.begin(), report.fold_taus.end(), 0.0) /
                    static_cast<double>(report.fold_taus.size());
  return report;
}

std::vector<MseRatioPoint> mse_ratio(const ScoreTensor& tensor, std::string_view target, std::span<const double> alphas,
                                     std::uint64_t seed, DesignMode mode, const LassoOptions& options) {
  const std::size_t t = tensor.metric_index(target);
  if (!tensor.metrics()[t].is_human()) {
    throw Error(ErrorCode::TargetNotHuman, "target '" + std::string(target) + "' is not a human metric");
  }
  const bool other_humans = std::any_of(tensor.metrics().begin(), tensor.metrics().end(),
                                        [&](const MetricProfile& m) { return m.is_human() && m.id != target; });
  if (!other_humans) {
    throw Error(ErrorCode::NoOtherHumans, "target '" + std::string(target) + "' is the only human metric");
  }
  const RegressionDesign with_humans = build_design(tensor, target, FeatureSet::Both, mode);
  const RegressionDesign auto_only = build_design(tensor, target, FeatureSet::AutoOnly, mode);

  const auto folds = fold_assignment(with_humans.rows(), 5, seed);
  const auto& test_rows = folds.front();
  const auto train_rows = complement(with_humans.rows(), test_rows);
  const RegressionDesign train_with = take_rows(with_humans, train_rows);
  const RegressionDesign test_with = take_rows(with_humans, test_rows);
  const RegressionDesign train_auto = take_rows(auto_only, train_rows);
  const RegressionDesign test_auto = take_rows(auto_only, test_rows);

  std::vector<MseRatioPoint> out;
  for (double alpha : alphas) {
    MseRatioPoint point;
    point.alpha = alpha;
    point.mse_with_humans =
        mean_squared_error(lasso_fit(train_with, alpha, options).predict(test_with.features), test_with.target);
    point.mse_auto_only =
        mean_squared_error(lasso_fit(train_auto, alpha, options).predict(test_auto.features), test_auto.target);
    if (point.mse_auto_only > 0.0) point.ratio = point.mse_with_humans / point.mse_auto_only;
    out.push_back(point);
  }
  return out;
}

std::vector<TimelinePoint> timeline_fit(const ScoreTensor& tensor, std::string_view target,
                                        const RegressorConfig& config, std::size_t folds, std::uint64_t seed,
                                        DesignMode mode) {
  const std::size_t t = tensor.metric_index(target);
  if (!tensor.metrics()[t].is_human()) {
    throw Error(ErrorCode::TargetNotHuman, "target '" + std::string(target) + "' is not a human metric");
  }
  struct Group {
    std::string date;
    std::vector<std::string> ids;
  };
  std::map<std::string, Group> groups;
  for (const auto& m : tensor.metrics()) {
    if (m.is_human()) continue;
    if (!m.release_date) throw Error(ErrorCode::MissingReleaseDate, "metric '" + m.id + "' has no release_date");
    const std::string label = m.family.value_or(m.id);
    auto [it, inserted] = groups.try_emplace(label, Group{*m.release_date, {}});
    it->second.date = std::min(it->second.date, *m.release_date);
    it->second.ids.push_back(m.id);
  }
  if (groups.empty()) throw Error(ErrorCode::NoFeatures, "no automatic metrics to order by release");

  std::vector<std::pair<std::string, const Group*>> ordered;
  for (const auto& [label, group] : groups) ordered.emplace_back(label, &group);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second->date < b.second->date; });

  std::vector<TimelinePoint> out;
  std::vector<std::string> available;
  for (const auto& [label, group] : ordered) {
    available.insert(available.end(), group->ids.begin(), group->ids.end());
    // Tensor order, so the full prefix reproduces the automatic-only design.
    std::vector<std::string> features;
    for (const auto& m : tensor.metrics()) {
      if (std::find(available.begin(), available.end(), m.id) != available.end()) features.push_back(m.id);
    }
    RegressionDesign design = build_design(tensor, target, features, mode);
    if (features.size() == static_cast<std::size_t>(std::count_if(
                               tensor.metrics().begin(), tensor.metrics().end(),
                               [](const MetricProfile& m) { return !m.is_human(); }))) {
      design.feature_set = FeatureSet::AutoOnly;
    }
    const PredictionReport report = kfold_cv(design, config, folds, seed);
    TimelinePoint point;
    point.label = label;
    point.release_date = group->date;
    point.added_ids = group->ids;
    point.feature_ids = std::move(features);
    point.fold_taus = report.fold_taus;
    point.mean_tau = report.mean_tau;
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace rankmetrics
