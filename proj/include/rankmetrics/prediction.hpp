#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rankmetrics/scoreset.hpp"

namespace rankmetrics {

enum class FeatureSet { AutoOnly, HumanOnly, Both, Custom };
std::string_view to_string(FeatureSet set);

// RawScores regresses on oriented scores. Ranks replaces every value by the
// system's mid-rank within its utterance under that metric.
enum class DesignMode { RawScores, Ranks };
std::string_view to_string(DesignMode mode);

// One row per (system, utterance), system-major.
struct RegressionDesign {
  Eigen::MatrixXd features;
  Eigen::VectorXd target;
  std::string target_id;
  std::vector<std::string> feature_ids;
  std::vector<std::pair<std::string, std::string>> row_keys;
  FeatureSet feature_set = FeatureSet::Custom;
  DesignMode mode = DesignMode::RawScores;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(features.cols()); }
};

// AutoOnly: every automatic metric. HumanOnly: every other human metric.
// Both: automatic metrics followed by the other human metrics. Tensor order
// within each group. Throws TargetNotHuman, NoFeatures.
RegressionDesign build_design(const ScoreTensor& tensor, std::string_view target, FeatureSet set,
                              DesignMode mode = DesignMode::RawScores);

// Explicit feature list, kept in the given order.
RegressionDesign build_design(const ScoreTensor& tensor, std::string_view target,
                              std::span<const std::string> feature_ids, DesignMode mode = DesignMode::RawScores);

RegressionDesign take_rows(const RegressionDesign& design, std::span<const std::size_t> rows);

// ---------------------------------------------------------------------------
// Lasso

struct LassoOptions {
  std::size_t max_iter = 100000;
  double tol = 1e-10;
};

struct LassoModel {
  double alpha = 0.0;
  // Weights on standardized features (zero mean, unit population variance)
  // and the equivalent weights on the raw columns.
  Eigen::VectorXd standardized_weights;
  Eigen::VectorXd weights;
  double intercept = 0.0;
  Eigen::VectorXd feature_means;
  // 0 marks a constant column whose weight is pinned to 0.
  Eigen::VectorXd feature_scales;
  std::size_t iterations = 0;
  bool converged = false;

  Eigen::VectorXd predict(const Eigen::MatrixXd& features) const;
};

// Minimises (1/2P) |y - Zw - b|^2 + alpha |w|_1 over standardized Z by cyclic
// coordinate descent, intercept unpenalized. Stops when the largest
// coordinate update in a sweep drops below tol; hitting max_iter leaves
// converged == false.
LassoModel lasso_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& target, double alpha,
                     const LassoOptions& options = {});
LassoModel lasso_fit(const RegressionDesign& design, double alpha, const LassoOptions& options = {});

// Smallest alpha at which every weight is zero: max_j |<z_j, y - mean(y)>| / P.
double lasso_alpha_max(const Eigen::MatrixXd& features, const Eigen::VectorXd& target);

struct LassoPath {
  std::vector<std::string> feature_ids;
  std::vector<double> alphas;
  std::vector<LassoModel> models;
};

// Warm-started fits along a descending alpha grid.
LassoPath lasso_path(const RegressionDesign& design, std::span<const double> alphas, const LassoOptions& options = {});

// `count` log-spaced values from alpha_max down to alpha_max * min_ratio.
std::vector<double> log_alpha_grid(double alpha_max, std::size_t count = 20, double min_ratio = 1e-3);

// ---------------------------------------------------------------------------
// Gradient-boosted regression trees

struct GbtConfig {
  std::size_t rounds = 200;
  std::size_t depth = 3;
  double learning_rate = 0.1;
  std::size_t min_samples_leaf = 2;
};

struct TreeNode {
  // -1 for a leaf.
  int feature = -1;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  double value = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  bool is_single_leaf() const { return nodes.size() == 1; }
};

struct BoostedTreesModel {
  double base_prediction = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
  // Training MSE after the base prediction and after every tree.
  std::vector<double> train_mse;

  Eigen::VectorXd predict(const Eigen::MatrixXd& features) const;
};

// Squared-loss boosting from the target mean. Each round fits an exact greedy
// variance-reduction tree to the residuals. Deterministic: there is no
// sampling, and equal gains keep the lowest (feature, threshold).
BoostedTreesModel gbt_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& target, const GbtConfig& config = {});
BoostedTreesModel gbt_fit(const RegressionDesign& design, const GbtConfig& config = {});

// ---------------------------------------------------------------------------
// Cross-validation and derived analyses

enum class RegressorKind { Lasso, Gbt };
std::string_view to_string(RegressorKind kind);

struct RegressorConfig {
  RegressorKind kind = RegressorKind::Gbt;
  double lasso_alpha = 1e-3;
  LassoOptions lasso;
  GbtConfig gbt;
};

struct PredictionReport {
  std::string target_id;
  FeatureSet feature_set = FeatureSet::Custom;
  std::vector<std::string> feature_ids;
  DesignMode mode = DesignMode::RawScores;
  RegressorKind regressor = RegressorKind::Gbt;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::vector<double> fold_taus;
  double mean_tau = 0.0;
};

// Test-row indices per fold: seeded Fisher-Yates shuffle of 0..rows-1, then
// contiguous blocks whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> fold_assignment(std::size_t rows, std::size_t folds, std::uint64_t seed);

Eigen::VectorXd fit_and_predict(const RegressionDesign& train, const Eigen::MatrixXd& test_features,
                                const RegressorConfig& config);

// Per fold: fit on the rest, predict the held-out rows and score
// kendall_tau(rank(prediction), rank(truth)). Throws TooFewRows unless every
// test fold has at least 2 rows.
PredictionReport kfold_cv(const RegressionDesign& design, const RegressorConfig& config, std::size_t folds = 5,
                          std::uint64_t seed = 0);

struct MseRatioPoint {
  double alpha = 0.0;
  double mse_with_humans = 0.0;
  double mse_auto_only = 0.0;
  // Absent when the automatic-only error is exactly zero.
  std::optional<double> ratio;
};

// Lasso test MSE with automatic plus other human features over automatic
// only, on one seeded hold-out split (the first of five folds). Each alpha is
// fit from zero weights. Throws NoOtherHumans.
std::vector<MseRatioPoint> mse_ratio(const ScoreTensor& tensor, std::string_view target, std::span<const double> alphas,
                                     std::uint64_t seed = 0, DesignMode mode = DesignMode::RawScores,
                                     const LassoOptions& options = {});

struct TimelinePoint {
  // Family tag, or the metric id when it has none.
  std::string label;
  std::string release_date;
  std::vector<std::string> added_ids;
  std::vector<std::string> feature_ids;
  std::vector<double> fold_taus;
  double mean_tau = 0.0;
};

// Automatic metrics grouped by family (untagged metrics stand alone), each
// group dated by its earliest member, ordered by (date, label). Point i
// cross-validates on the first i groups. Throws MissingReleaseDate.
std::vector<TimelinePoint> timeline_fit(const ScoreTensor& tensor, std::string_view target,
                                        const RegressorConfig& config, std::size_t folds = 5, std::uint64_t seed = 0,
                                        DesignMode mode = DesignMode::RawScores);

}  // namespace rankmetrics
