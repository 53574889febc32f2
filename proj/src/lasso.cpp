#include <algorithm>
#include <cmath>

#include "rankmetrics/error.hpp"
#include "rankmetrics/prediction.hpp"

namespace rankmetrics {

namespace {

struct Standardized {
  Eigen::MatrixXd z;
  Eigen::VectorXd centered_target;
  Eigen::VectorXd means;
  Eigen::VectorXd scales;
  // <z_j, z_j> / P: 1 up to rounding, 0 for constant columns.
  Eigen::VectorXd norms;
  double target_mean = 0.0;
};

Standardized standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "feature rows and target length differ");
  if (x.rows() < 1) throw Error(ErrorCode::TooFewRows, "lasso needs at least one row");
  if (!x.allFinite() || !y.allFinite()) throw Error(ErrorCode::NonFiniteScore, "lasso input has non-finite values");
  const auto p = static_cast<double>(x.rows());
  Standardized s;
  s.means = x.colwise().mean().transpose();
  s.z = x.rowwise() - s.means.transpose();
  s.scales.resize(x.cols());
  s.norms.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double sd = std::sqrt(s.z.col(j).squaredNorm() / p);
    const double magnitude = std::max(1.0, x.col(j).cwiseAbs().maxCoeff());
    if (sd <= 1e-12 * magnitude) {
      s.scales(j) = 0.0;
      s.z.col(j).setZero();
      s.norms(j) = 0.0;
    } else {
      s.scales(j) = sd;
      s.z.col(j) /= sd;
      s.norms(j) = s.z.col(j).squaredNorm() / p;
    }
  }
  s.target_mean = y.mean();
  s.centered_target = y.array() - s.target_mean;
  return s;
}

double soft_threshold(double value, double threshold) {
  if (value > threshold) return value - threshold;
  if (value < -threshold) return value + threshold;
  return 0.0;
}

LassoModel coordinate_descent(const Standardized& s, double alpha, Eigen::VectorXd weights, const LassoOptions& options) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lasso alpha must be nonnegative");
  const auto p = static_cast<double>(s.z.rows());
  Eigen::VectorXd residual = s.centered_target - s.z * weights;
  LassoModel model;
  model.alpha = alpha;
  for (model.iterations = 0; model.iterations < options.max_iter;) {
    ++model.iterations;
    double max_update = 0.0;
    for (Eigen::Index j = 0; j < s.z.cols(); ++j) {
      if (s.norms(j) == 0.0) continue;
      const double old = weights(j);
      const double rho = s.z.col(j).dot(residual) / p + s.norms(j) * old;
      const double updated = soft_threshold(rho, alpha) / s.norms(j);
      const double delta = updated - old;
      if (delta != 0.0) {
        residual -= delta * s.z.col(j);
        weights(j) = updated;
        max_update = std::max(max_update, std::abs(delta));
      }
    }
    if (max_update < options.tol) {
      model.converged = true;
      break;
    }
  }
  model.standardized_weights = weights;
  model.feature_means = s.means;
  model.feature_scales = s.scales;
  model.weights.resize(weights.size());
  model.intercept = s.target_mean;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    model.weights(j) = s.scales(j) == 0.0 ? 0.0 : weights(j) / s.scales(j);
    if (model.weights(j) != 0.0) model.intercept -= model.weights(j) * s.means(j);
  }
  return model;
}

}  // namespace

Eigen::VectorXd LassoModel::predict(const Eigen::MatrixXd& features) const {
  if (features.cols() != weights.size()) throw Error(ErrorCode::LengthMismatch, "feature count differs from model");
  Eigen::VectorXd out = Eigen::VectorXd::Constant(features.rows(), intercept);
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (weights(j) != 0.0) out += weights(j) * features.col(j);
  }
  return out;
}

LassoModel lasso_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& target, double alpha,
                     const LassoOptions& options) {
  const Standardized s = standardize(features, target);
  return coordinate_descent(s, alpha, Eigen::VectorXd::Zero(features.cols()), options);
}

LassoModel lasso_fit(const RegressionDesign& design, double alpha, const LassoOptions& options) {
  return lasso_fit(design.features, design.target, alpha, options);
}

double lasso_alpha_max(const Eigen::MatrixXd& features, const Eigen::VectorXd& target) {
  const Standardized s = standardize(features, target);
  // Same arithmetic as the first coordinate-descent sweep, so fitting at
  // exactly this alpha leaves every weight at zero.
  const auto p = static_cast<double>(s.z.rows());
  double top = 0.0;
  for (Eigen::Index j = 0; j < s.z.cols(); ++j) {
    if (s.norms(j) == 0.0) continue;
    top = std::max(top, std::abs(s.z.col(j).dot(s.centered_target) / p));
  }
  return top;
}

LassoPath lasso_path(const RegressionDesign& design, std::span<const double> alphas, const LassoOptions& options) {
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (alphas[i] > alphas[i - 1]) throw Error(ErrorCode::InvalidArgument, "lasso path alphas must be descending");
  }
  const Standardized s = standardize(design.features, design.target);
  LassoPath path;
  path.feature_ids = design.feature_ids;
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(design.features.cols());
  for (double alpha : alphas) {
    LassoModel model = coordinate_descent(s, alpha, warm, options);
    warm = model.standardized_weights;
    path.alphas.push_back(alpha);
    path.models.push_back(std::move(model));
  }
  return path;
}

std::vector<double> log_alpha_grid(double alpha_max, std::size_t count, double min_ratio) {
  if (count == 0) return {};
  if (count == 1) return {alpha_max};
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    grid.push_back(alpha_max * std::pow(min_ratio, t));
  }
  return grid;
}

}  // namespace rankmetrics
