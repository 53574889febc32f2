#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rankmetrics/error.hpp"
#include "rankmetrics/structure.hpp"

namespace rankmetrics {

MetricMatrix build_metric_matrix(const ScoreTensor& tensor, Level level) {
  MetricMatrix out;
  out.level = level;
  const std::size_t dim = level == Level::System ? tensor.num_systems() : tensor.num_utterances();
  out.data.resize(static_cast<Eigen::Index>(tensor.num_metrics()), static_cast<Eigen::Index>(dim));
  for (std::size_t m = 0; m < tensor.num_metrics(); ++m) {
    const auto& profile = tensor.metrics()[m];
    const auto rep = representation(tensor, profile.id, level);
    for (std::size_t j = 0; j < dim; ++j) {
      out.data(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = rep.values[j];
    }
    out.metric_ids.push_back(profile.id);
    out.kinds.push_back(profile.kind);
  }
  return out;
}

PcaResult pca(const MetricMatrix& matrix, bool standardize) { return pca(matrix.data, standardize); }

PcaResult pca(const Eigen::MatrixXd& data, bool standardize) {
  const Eigen::Index rows = data.rows();
  if (rows < 2) throw Error(ErrorCode::InvalidArgument, "PCA needs at least 2 rows");
  if (!data.allFinite()) throw Error(ErrorCode::NonFiniteScore, "PCA input has non-finite entries");

  PcaResult out;
  out.standardized = standardize;
  const Eigen::VectorXd mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
  const Eigen::VectorXd sd =
      (centered.colwise().squaredNorm() / static_cast<double>(rows - 1)).cwiseSqrt().transpose();

  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double magnitude = std::max(1.0, data.col(j).cwiseAbs().maxCoeff());
    const bool constant = sd(j) <= 1e-12 * magnitude;
    if (standardize && constant) {
      out.dropped_columns.push_back(static_cast<std::size_t>(j));
    } else {
      out.kept_columns.push_back(static_cast<std::size_t>(j));
    }
  }
  if (out.kept_columns.empty() || sd.maxCoeff() == 0.0) {
    throw Error(ErrorCode::DegenerateMatrix, "every column has zero variance");
  }

  const auto kept = static_cast<Eigen::Index>(out.kept_columns.size());
  out.prepared.resize(rows, kept);
  out.center.resize(kept);
  out.scale.resize(kept);
  for (Eigen::Index c = 0; c < kept; ++c) {
    const auto j = static_cast<Eigen::Index>(out.kept_columns[static_cast<std::size_t>(c)]);
    out.center(c) = mean(j);
    out.scale(c) = standardize ? sd(j) : 1.0;
    out.prepared.col(c) = centered.col(j) / out.scale(c);
  }

  const double denom = static_cast<double>(rows - 1);
  Eigen::VectorXd values;
  if (kept <= rows) {
    const Eigen::MatrixXd cov = (out.prepared.transpose() * out.prepared) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigendecomposition failed");
    // Eigen sorts ascending.
    values = solver.eigenvalues().reverse().cwiseMax(0.0);
    // Rank-deficient directions come back as rounding noise.
    for (Eigen::Index c = 1; c < values.size(); ++c) {
      if (values(c) <= 1e-12 * values(0)) values(c) = 0.0;
    }
    out.components = solver.eigenvectors().rowwise().reverse();
  } else {
    const Eigen::MatrixXd gram = (out.prepared * out.prepared.transpose()) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigendecomposition failed");
    const Eigen::VectorXd all = solver.eigenvalues().reverse();
    const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
    Eigen::Index positive = 0;
    while (positive < all.size() && all(positive) > 1e-12 * all(0)) ++positive;
    values = all.head(positive);
    out.components.resize(kept, positive);
    for (Eigen::Index c = 0; c < positive; ++c) {
      out.components.col(c) = out.prepared.transpose() * vectors.col(c) / std::sqrt(denom * values(c));
    }
  }

  for (Eigen::Index c = 0; c < out.components.cols(); ++c) {
    Eigen::Index arg = 0;
    out.components.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.components(arg, c) < 0.0) out.components.col(c) *= -1.0;
  }
  out.scores = out.prepared * out.components;
  out.scores2d = Eigen::MatrixXd::Zero(rows, 2);
  const Eigen::Index shown = std::min<Eigen::Index>(2, out.scores.cols());
  out.scores2d.leftCols(shown) = out.scores.leftCols(shown);

  const double total = values.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateMatrix, "total variance is zero");
  for (Eigen::Index c = 0; c < values.size(); ++c) {
    out.eigenvalues.push_back(values(c));
    out.explained_ratio.push_back(values(c) / total);
  }
  return out;
}

std::size_t effective_dimension(std::span<const double> ratios, double threshold) {
  double cumulative = 0.0;
  for (std::size_t d = 0; d < ratios.size(); ++d) {
    cumulative += ratios[d];
    if (cumulative >= threshold - 1e-12) return d + 1;
  }
  return ratios.size();
}

}  // namespace rankmetrics
