#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rankmetrics/error.hpp"
#include "rankmetrics/prediction.hpp"
#include "rankmetrics/synthetic.hpp"
#include "support.hpp"

using namespace rankmetrics;
using testing_support::make_tensor;
using testing_support::profiles;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::NumericalFailure;
}

Eigen::MatrixXd gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = rng.normal();
  }
  return x;
}

double soft_threshold(double z, double a) { return z > a ? z - a : (z < -a ? z + a : 0.0); }

// Largest KKT violation of the standardized lasso problem.
double kkt_residual(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LassoModel& model) {
  const double p = static_cast<double>(x.rows());
  const Eigen::VectorXd resid = y - model.predict(x);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (model.feature_scales(j) == 0.0) continue;
    const Eigen::VectorXd z = (x.col(j).array() - model.feature_means(j)) / model.feature_scales(j);
    const double grad = z.dot(resid) / p;
    const double w = model.standardized_weights(j);
    const double violation = w != 0.0 ? std::abs(grad - model.alpha * (w > 0 ? 1.0 : -1.0))
                                      : std::max(0.0, std::abs(grad) - model.alpha);
    worst = std::max(worst, violation);
  }
  return worst;
}

// Tensor whose metric m has score columns[m] on row (system-major) s*K+u.
ScoreTensor tensor_from_columns(std::vector<MetricProfile> metrics, std::size_t systems, std::size_t utterances,
                                const Eigen::MatrixXd& columns) {
  return make_tensor(std::move(metrics), systems, utterances, [&](auto m, auto s, auto u) {
    return columns(static_cast<Eigen::Index>(s * utterances + u), static_cast<Eigen::Index>(m));
  });
}

MetricProfile automatic(std::string id, std::string date, std::optional<std::string> family = {}) {
  return {std::move(id), MetricKind::Automatic, Orientation::HigherBetter, std::move(date), std::move(family)};
}

MetricProfile human(std::string id) { return {std::move(id), MetricKind::Human, Orientation::HigherBetter, {}, {}}; }

// Brute-force regression stump: best single threshold split by squared error.
Eigen::VectorXd best_stump(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t min_leaf) {
  const Eigen::Index n = x.rows();
  double best_sse = (y.array() - y.mean()).square().sum();
  Eigen::VectorXd best = Eigen::VectorXd::Constant(n, y.mean());
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    std::set<double> values(x.col(f).data(), x.col(f).data() + n);
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double cut = (*it + *std::next(it)) / 2.0;
      double sl = 0, sr = 0;
      Eigen::Index nl = 0, nr = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (x(i, f) <= cut) sl += y(i), ++nl;
        else sr += y(i), ++nr;
      }
      if (nl < static_cast<Eigen::Index>(min_leaf) || nr < static_cast<Eigen::Index>(min_leaf)) continue;
      Eigen::VectorXd pred(n);
      for (Eigen::Index i = 0; i < n; ++i) pred(i) = x(i, f) <= cut ? sl / nl : sr / nr;
      const double sse = (y - pred).squaredNorm();
      if (sse < best_sse - 1e-12) {
        best_sse = sse;
        best = pred;
      }
    }
  }
  return best;
}

}  // namespace

TEST(BuildDesign, Examples) {
  Rng rng(1);
  const auto t = make_tensor({human("H:a"), human("H:b"), automatic("x1", "2001-01-01"), automatic("x2", "2002-01-01"),
                              automatic("x3", "2003-01-01"), automatic("x4", "2004-01-01")},
                             2, 3, [&](auto, auto, auto) { return rng.normal(); });
  const auto d = build_design(t, "H:a", FeatureSet::AutoOnly);
  EXPECT_EQ(d.rows(), 6u);
  EXPECT_EQ(d.cols(), 4u);
  EXPECT_EQ(d.row_keys[4], (std::pair<std::string, std::string>{"s001", "u001"}));
  EXPECT_EQ(d.features(4, 2), t.at(4, 1, 1));
  EXPECT_EQ(d.target(4), t.at(0, 1, 1));

  const auto both = build_design(t, "H:a", FeatureSet::Both);
  EXPECT_EQ(both.feature_ids, (std::vector<std::string>{"x1", "x2", "x3", "x4", "H:b"}));
  EXPECT_EQ(build_design(t, "H:b", FeatureSet::HumanOnly).feature_ids, (std::vector<std::string>{"H:a"}));

  const auto single = make_tensor({human("H:a"), automatic("x", "2001-01-01")}, 2, 2,
                                  [&](auto, auto, auto) { return rng.normal(); });
  EXPECT_EQ(code_of([&] { build_design(single, "H:a", FeatureSet::HumanOnly); }), ErrorCode::NoFeatures);
  EXPECT_EQ(code_of([&] { build_design(single, "x", FeatureSet::AutoOnly); }), ErrorCode::TargetNotHuman);
}

TEST(BuildDesign, RanksModeUsesPerUtteranceMidRanks) {
  const double a[2][2] = {{5, 1}, {5, 2}};
  const auto t = make_tensor({human("H:a"), automatic("x", "2001-01-01")}, 2, 2,
                             [&](auto m, auto s, auto u) { return m == 0 ? a[s][u] : double(s); });
  const auto d = build_design(t, "H:a", FeatureSet::AutoOnly, DesignMode::Ranks);
  EXPECT_EQ(d.mode, DesignMode::Ranks);
  // Row order (s0,u0), (s0,u1), (s1,u0), (s1,u1).
  EXPECT_EQ(d.target, (Eigen::VectorXd(4) << 1.5, 2.0, 1.5, 1.0).finished());
  EXPECT_EQ(d.features.col(0), (Eigen::VectorXd(4) << 2.0, 2.0, 1.0, 1.0).finished());
}

TEST(Lasso, UnivariateMatchesSoftThreshold) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd x = gaussian(rng, 50, 1) * 3.0 + Eigen::MatrixXd::Constant(50, 1, 2.0);
    const Eigen::VectorXd y = 0.7 * x.col(0) + gaussian(rng, 50, 1).col(0);
    const Eigen::VectorXd z = (x.col(0).array() - x.col(0).mean()) /
                              std::sqrt((x.col(0).array() - x.col(0).mean()).square().mean());
    const double corr = z.dot(y) / 50.0;
    for (double alpha : {0.0, 0.1 * std::abs(corr), 0.5 * std::abs(corr), 2.0 * std::abs(corr)}) {
      const auto model = lasso_fit(x, y, alpha);
      EXPECT_NEAR(model.standardized_weights(0), soft_threshold(corr, alpha), 1e-8);
    }
  }
}

TEST(Lasso, ZeroAlphaMatchesNormalEquations) {
  Rng rng(3);
  const Eigen::MatrixXd x = gaussian(rng, 80, 4);
  const Eigen::VectorXd y = x * Eigen::Vector4d(1.0, -2.0, 0.0, 0.5) + 0.3 * gaussian(rng, 80, 1).col(0);
  Eigen::MatrixXd a(80, 5);
  a << Eigen::VectorXd::Ones(80), x;
  const Eigen::VectorXd beta = (a.transpose() * a).ldlt().solve(a.transpose() * y);
  const auto model = lasso_fit(x, y, 0.0);
  EXPECT_TRUE(model.converged);
  EXPECT_NEAR(model.intercept, beta(0), 1e-6);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(model.weights(j), beta(j + 1), 1e-6);
}

TEST(Lasso, AlphaAboveThresholdZeroesEverything) {
  Rng rng(4);
  const Eigen::MatrixXd x = gaussian(rng, 60, 5);
  const Eigen::VectorXd y = x.col(2) + gaussian(rng, 60, 1).col(0);
  const double top = lasso_alpha_max(x, y);
  const auto zero = lasso_fit(x, y, top);
  EXPECT_TRUE(zero.weights.isZero(0.0));
  EXPECT_DOUBLE_EQ(zero.intercept, y.mean());
  EXPECT_FALSE(lasso_fit(x, y, 0.99 * top).weights.isZero(0.0));
}

TEST(Lasso, KktOnRandomDesigns) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rows = static_cast<Eigen::Index>(20 + rng.uniform_index(80));
    const auto cols = static_cast<Eigen::Index>(1 + rng.uniform_index(8));
    Eigen::MatrixXd x = gaussian(rng, rows, cols);
    if (cols > 2) x.col(1) = x.col(0) + 0.01 * x.col(1);  // collinear pair
    const Eigen::VectorXd y = x.col(0) - 0.5 * x.col(cols - 1) + gaussian(rng, rows, 1).col(0);
    const double alpha = lasso_alpha_max(x, y) * rng.uniform01() * 0.5;
    const auto model = lasso_fit(x, y, alpha);
    EXPECT_TRUE(model.converged);
    EXPECT_LE(kkt_residual(x, y, model), 1e-6);
  }
}

TEST(Lasso, ConstantColumnIsPinned) {
  Rng rng(6);
  Eigen::MatrixXd x = gaussian(rng, 30, 2);
  x.col(1).setConstant(3.0);
  const auto model = lasso_fit(x, x.col(0) * 2.0, 0.01);
  EXPECT_EQ(model.weights(1), 0.0);
  EXPECT_EQ(model.feature_scales(1), 0.0);
}

TEST(Lasso, AffineColumnRescalingLeavesPredictionsUnchanged) {
  Rng rng(7);
  const Eigen::MatrixXd x = gaussian(rng, 40, 3);
  const Eigen::VectorXd y = x.col(0) + 0.5 * x.col(1) + 0.2 * gaussian(rng, 40, 1).col(0);
  Eigen::MatrixXd scaled = x;
  scaled.col(1) = 25.0 * x.col(1).array() - 4.0;
  const auto a = lasso_fit(x, y, 0.05), b = lasso_fit(scaled, y, 0.05);
  EXPECT_LE((a.predict(x) - b.predict(scaled)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(a.standardized_weights(1), b.standardized_weights(1), 1e-8);
  EXPECT_NEAR(a.weights(1), 25.0 * b.weights(1), 1e-8);
  EXPECT_EQ(code_of([&] { lasso_fit(x, y, -1.0); }), ErrorCode::InvalidArgument);
}

TEST(LassoPath, EndpointsAndOrder) {
  Rng rng(8);
  const auto t = tensor_from_columns({human("H:a"), automatic("x1", "2001-01-01"), automatic("x2", "2002-01-01"),
                                      automatic("x3", "2003-01-01")},
                                     5, 12, gaussian(rng, 60, 4));
  const auto design = build_design(t, "H:a", FeatureSet::AutoOnly);
  auto alphas = log_alpha_grid(lasso_alpha_max(design.features, design.target), 8);
  alphas.push_back(0.0);
  const auto path = lasso_path(design, alphas);
  ASSERT_EQ(path.models.size(), alphas.size());
  EXPECT_EQ(path.feature_ids, design.feature_ids);
  EXPECT_TRUE(path.models.front().weights.isZero(0.0));
  const auto direct = lasso_fit(design, 0.0);
  EXPECT_LE((path.models.back().weights - direct.weights).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(code_of([&] { lasso_path(design, std::vector<double>{0.1, 0.2}); }), ErrorCode::InvalidArgument);
}

TEST(LogAlphaGrid, Spacing) {
  const auto g = log_alpha_grid(2.0, 4, 1e-3);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g.front(), 2.0);
  EXPECT_NEAR(g.back(), 2e-3, 1e-15);
  EXPECT_NEAR(g[1] / g[0], g[2] / g[1], 1e-12);
}

TEST(Gbt, ConstantTargetGivesDegenerateTrees) {
  Rng rng(9);
  const Eigen::MatrixXd x = gaussian(rng, 30, 3);
  const auto model = gbt_fit(x, Eigen::VectorXd::Constant(30, 4.25));
  EXPECT_EQ(model.base_prediction, 4.25);
  for (const auto& tree : model.trees) EXPECT_TRUE(tree.is_single_leaf());
  EXPECT_TRUE((model.predict(x).array() == 4.25).all());
}

TEST(Gbt, SingleStumpMatchesBruteForceAndReducesMse) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd x = gaussian(rng, 25, 3);
    x.col(2) = x.col(2).array().round();  // duplicate values
    Eigen::VectorXd y = gaussian(rng, 25, 1).col(0);
    for (Eigen::Index i = 0; i < 25; ++i) y(i) += x(i, 1) > 0.2 ? 2.0 : 0.0;
    const auto model = gbt_fit(x, y, GbtConfig{1, 1, 1.0, 2});
    EXPECT_LT(model.train_mse[1], model.train_mse[0]);
    EXPECT_LE((model.predict(x) - best_stump(x, y, 2)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Gbt, TrainingMseNonIncreasingAndDeterministic) {
  Rng rng(11);
  const Eigen::MatrixXd x = gaussian(rng, 120, 4);
  Eigen::VectorXd y(120);
  for (Eigen::Index i = 0; i < 120; ++i) y(i) = std::sin(x(i, 0)) + x(i, 1) * x(i, 2) + 0.1 * rng.normal();
  const auto model = gbt_fit(x, y, GbtConfig{50, 3, 0.1, 2});
  ASSERT_EQ(model.train_mse.size(), 51u);
  for (std::size_t r = 1; r < model.train_mse.size(); ++r) EXPECT_LE(model.train_mse[r], model.train_mse[r - 1]);
  const Eigen::VectorXd residual = y - model.predict(x);
  EXPECT_NEAR(residual.squaredNorm() / 120.0, model.train_mse.back(), 1e-10);
  const auto again = gbt_fit(x, y, GbtConfig{50, 3, 0.1, 2});
  EXPECT_EQ(again.predict(x), model.predict(x));
}

TEST(FoldAssignment, PartitionsRows) {
  for (std::size_t rows : {10u, 11u, 37u}) {
    const auto folds = fold_assignment(rows, 5, 3);
    ASSERT_EQ(folds.size(), 5u);
    std::vector<int> seen(rows, 0);
    std::size_t smallest = rows, largest = 0;
    for (const auto& f : folds) {
      smallest = std::min(smallest, f.size());
      largest = std::max(largest, f.size());
      for (auto r : f) ++seen[r];
    }
    EXPECT_LE(largest - smallest, 1u);
    for (int s : seen) EXPECT_EQ(s, 1);
  }
  EXPECT_NE(fold_assignment(20, 5, 1), fold_assignment(20, 5, 2));
  EXPECT_EQ(code_of([] { fold_assignment(3, 5, 0); }), ErrorCode::TooFewRows);
  EXPECT_EQ(code_of([] { fold_assignment(10, 1, 0); }), ErrorCode::InvalidArgument);
}

TEST(KfoldCv, TargetEqualToFeatureIsPerfect) {
  Rng rng(12);
  Eigen::MatrixXd cols = gaussian(rng, 60, 3);
  cols.col(1) = cols.col(0);
  const auto t = tensor_from_columns({human("H:a"), automatic("copy", "2001-01-01"), automatic("noise", "2002-01-01")},
                                     6, 10, cols);
  const auto design = build_design(t, "H:a", std::vector<std::string>{"copy"});
  RegressorConfig lasso;
  lasso.kind = RegressorKind::Lasso;
  const auto report = kfold_cv(design, lasso, 5, 1);
  EXPECT_EQ(report.mean_tau, 1.0);
  EXPECT_EQ(report.fold_taus.size(), 5u);
  // Boosted residual trees need not be monotone in the feature.
  EXPECT_GE(kfold_cv(design, RegressorConfig{}, 5, 1).mean_tau, 0.99);
  // The noise column's lasso gradient stays below alpha, so its weight is 0.
  EXPECT_EQ(kfold_cv(build_design(t, "H:a", FeatureSet::AutoOnly), lasso, 5, 1).mean_tau, 1.0);
  EXPECT_EQ(code_of([&] { kfold_cv(design, RegressorConfig{}, 40, 0); }), ErrorCode::TooFewRows);
  EXPECT_EQ(code_of([&] { kfold_cv(design, RegressorConfig{}, 61, 0); }), ErrorCode::TooFewRows);
}

TEST(KfoldCv, DeterministicAndBounded) {
  const auto t = generate_synthetic(SyntheticConfig{.systems = 5, .utterances = 20, .seed = 4});
  const auto design = build_design(t, "H:human_0", FeatureSet::Both);
  const auto a = kfold_cv(design, RegressorConfig{}, 5, 9);
  const auto b = kfold_cv(design, RegressorConfig{}, 5, 9);
  EXPECT_EQ(a.fold_taus, b.fold_taus);
  EXPECT_EQ(a.seed, 9u);
  EXPECT_EQ(a.feature_set, FeatureSet::Both);
  for (double tau : a.fold_taus) {
    EXPECT_GE(tau, -1.0);
    EXPECT_LE(tau, 1.0);
  }
}

TEST(MseRatio, CopyOfTargetDrivesRatioToZero) {
  Rng rng(13);
  Eigen::MatrixXd cols = gaussian(rng, 200, 4);
  cols.col(1) = cols.col(0);
  const auto t = tensor_from_columns(
      {human("H:a"), human("H:copy"), automatic("x1", "2001-01-01"), automatic("x2", "2002-01-01")}, 10, 20, cols);
  const auto points = mse_ratio(t, "H:a", std::vector<double>{1e-4}, 3);
  ASSERT_EQ(points.size(), 1u);
  ASSERT_TRUE(points[0].ratio.has_value());
  EXPECT_LT(*points[0].ratio, 1e-3);
}

TEST(MseRatio, BeyondThresholdsRatioIsExactlyOne) {
  const auto t = generate_synthetic(SyntheticConfig{.systems = 6, .utterances = 30, .seed = 5});
  const auto points = mse_ratio(t, "H:human_0", std::vector<double>{1e6, 50.0}, 1);
  for (const auto& p : points) {
    ASSERT_TRUE(p.ratio.has_value());
    EXPECT_EQ(*p.ratio, 1.0);
  }
}

TEST(MseRatio, NoiseHumanFeaturesGiveRatioNearOne) {
  Rng rng(14);
  Eigen::MatrixXd cols = gaussian(rng, 2000, 5);
  cols.col(0) = cols.col(2) + 0.5 * cols.col(0);
  const auto t = tensor_from_columns(
      {human("H:a"), human("H:noise"), automatic("x1", "2001-01-01"), automatic("x2", "2002-01-01"),
       automatic("x3", "2003-01-01")},
      20, 100, cols);
  for (const auto& p : mse_ratio(t, "H:a", std::vector<double>{0.05, 0.01, 0.001}, 2)) {
    EXPECT_NEAR(*p.ratio, 1.0, 0.02) << p.alpha;
  }
}

TEST(MseRatio, NeedsAnotherHuman) {
  const auto t = generate_synthetic(SyntheticConfig{.systems = 3, .utterances = 10, .humans = 1, .seed = 1});
  EXPECT_EQ(code_of([&] { mse_ratio(t, "H:human_0", std::vector<double>{0.1}); }), ErrorCode::NoOtherHumans);
}

TEST(Timeline, FirstPointCopyIsPerfectAndEndpointMatchesAutoOnly) {
  Rng rng(15);
  Eigen::MatrixXd cols = gaussian(rng, 80, 4);
  cols.col(1) = cols.col(0);
  const auto t = tensor_from_columns({human("H:a"), automatic("early", "1999-05-01"),
                                      automatic("late_b", "2010-01-01", "fam"), automatic("late_a", "2004-01-01", "fam")},
                                     8, 10, cols);
  RegressorConfig config;
  config.kind = RegressorKind::Lasso;
  const auto points = timeline_fit(t, "H:a", config, 5, 2);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].label, "early");
  EXPECT_EQ(points[0].mean_tau, 1.0);
  EXPECT_EQ(points[1].label, "fam");
  EXPECT_EQ(points[1].release_date, "2004-01-01");
  EXPECT_EQ(points[1].added_ids, (std::vector<std::string>{"late_b", "late_a"}));
  const auto auto_only = kfold_cv(build_design(t, "H:a", FeatureSet::AutoOnly), config, 5, 2);
  EXPECT_EQ(points.back().fold_taus, auto_only.fold_taus);
  EXPECT_EQ(points.back().feature_ids, auto_only.feature_ids);
}

TEST(Timeline, RedundantFeatureBarelyMovesTau) {
  double total_shift = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    Eigen::MatrixXd cols = gaussian(rng, 100, 3);
    cols.col(0) = cols.col(1) + 0.8 * cols.col(0);
    cols.col(2) = cols.col(1);
    const auto t = tensor_from_columns(
        {human("H:a"), automatic("x", "2001-01-01"), automatic("x_dup", "2002-01-01")}, 10, 10, cols);
    RegressorConfig config;
    config.kind = RegressorKind::Lasso;
    const auto points = timeline_fit(t, "H:a", config, 5, seed);
    total_shift += points[1].mean_tau - points[0].mean_tau;
  }
  EXPECT_LT(std::abs(total_shift / 20.0), 0.05);
}

TEST(Timeline, MissingReleaseDate) {
  Rng rng(16);
  const auto t = make_tensor({human("H:a"), {"x", MetricKind::Automatic, Orientation::HigherBetter, {}, {}}}, 3, 4,
                             [&](auto, auto, auto) { return rng.normal(); });
  EXPECT_EQ(code_of([&] { timeline_fit(t, "H:a", RegressorConfig{}); }), ErrorCode::MissingReleaseDate);
}
