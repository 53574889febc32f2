#include <algorithm>
#include <numeric>

#include "rankmetrics/error.hpp"
#include "rankmetrics/prediction.hpp"

namespace rankmetrics {

namespace {

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  std::size_t left_count = 0;
};

// Grows one tree on the residuals. `sorted[f]` lists the node's rows in
// ascending order of feature f; children receive stable partitions of it, so
// every level costs O(rows * features).
class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const Eigen::VectorXd& residual, const GbtConfig& config)
      : x_(x), residual_(residual), config_(config), side_(static_cast<std::size_t>(x.rows()), 0) {}

  RegressionTree build(std::vector<std::vector<std::size_t>> sorted) {
    RegressionTree tree;
    grow(tree, std::move(sorted), 0);
    return tree;
  }

 private:
  std::size_t grow(RegressionTree& tree, std::vector<std::vector<std::size_t>> sorted, std::size_t depth) {
    const std::vector<std::size_t>& rows = sorted.front();
    double sum = 0.0;
    double sum_sq = 0.0;
    bool uniform = true;
    const double first = residual_(static_cast<Eigen::Index>(rows.front()));
    for (std::size_t r : rows) {
      const double v = residual_(static_cast<Eigen::Index>(r));
      sum += v;
      sum_sq += v * v;
      uniform = uniform && v == first;
    }
    const auto n = static_cast<double>(rows.size());
    const std::size_t index = tree.nodes.size();
    tree.nodes.push_back(TreeNode{-1, 0.0, 0, 0, sum / n});

    if (depth >= config_.depth || rows.size() < 2 * config_.min_samples_leaf) return index;
    const double node_ss = sum_sq - sum * sum / n;
    if (uniform || !(node_ss > 0.0)) return index;

    const Split split = best_split(sorted, sum, node_ss);
    if (!split.found) return index;

    for (std::size_t i = 0; i < sorted[static_cast<std::size_t>(split.feature)].size(); ++i) {
      side_[sorted[static_cast<std::size_t>(split.feature)][i]] = i < split.left_count ? 1 : 2;
    }
    std::vector<std::vector<std::size_t>> left(sorted.size());
    std::vector<std::vector<std::size_t>> right(sorted.size());
    for (std::size_t f = 0; f < sorted.size(); ++f) {
      left[f].reserve(split.left_count);
      right[f].reserve(rows.size() - split.left_count);
      for (std::size_t r : sorted[f]) (side_[r] == 1 ? left[f] : right[f]).push_back(r);
    }
    sorted.clear();
    sorted.shrink_to_fit();

    const std::size_t l = grow(tree, std::move(left), depth + 1);
    const std::size_t r = grow(tree, std::move(right), depth + 1);
    TreeNode& node = tree.nodes[index];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return index;
  }

  Split best_split(const std::vector<std::vector<std::size_t>>& sorted, double total, double node_ss) const {
    Split best;
    const std::size_t n = sorted.front().size();
    const double base = total * total / static_cast<double>(n);
    for (std::size_t f = 0; f < sorted.size(); ++f) {
      const auto& order = sorted[f];
      const auto col = static_cast<Eigen::Index>(f);
      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += residual_(static_cast<Eigen::Index>(order[i]));
        const std::size_t left_count = i + 1;
        if (left_count < config_.min_samples_leaf || n - left_count < config_.min_samples_leaf) continue;
        const double here = x_(static_cast<Eigen::Index>(order[i]), col);
        const double next = x_(static_cast<Eigen::Index>(order[i + 1]), col);
        if (!(here < next)) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(left_count) +
                            right_sum * right_sum / static_cast<double>(n - left_count) - base;
        if (gain > best.gain && gain > 1e-12 * node_ss) {
          double threshold = here + (next - here) / 2.0;
          if (!(threshold < next)) threshold = here;
          best = Split{true, static_cast<int>(f), threshold, gain, left_count};
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& residual_;
  const GbtConfig& config_;
  std::vector<char> side_;
};

}  // namespace

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    i = row(nodes[i].feature) <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  }
  return nodes[i].value;
}

Eigen::VectorXd BoostedTreesModel::predict(const Eigen::MatrixXd& features) const {
  Eigen::VectorXd out = Eigen::VectorXd::Constant(features.rows(), base_prediction);
  for (const auto& tree : trees) {
    for (Eigen::Index r = 0; r < features.rows(); ++r) out(r) += learning_rate * tree.predict(features.row(r));
  }
  return out;
}

BoostedTreesModel gbt_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& target, const GbtConfig& config) {
  if (features.rows() != target.size()) throw Error(ErrorCode::LengthMismatch, "feature rows and target length differ");
  if (features.rows() < 2) throw Error(ErrorCode::TooFewRows, "boosting needs at least 2 rows");
  if (features.cols() < 1) throw Error(ErrorCode::NoFeatures, "boosting needs at least one feature");
  if (!features.allFinite() || !target.allFinite()) {
    throw Error(ErrorCode::NonFiniteScore, "boosting input has non-finite values");
  }
  if (config.min_samples_leaf < 1 || !(config.learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "boosting needs min_samples_leaf >= 1 and a positive learning rate");
  }

  const std::size_t rows = static_cast<std::size_t>(features.rows());
  std::vector<std::vector<std::size_t>> sorted(static_cast<std::size_t>(features.cols()));
  for (std::size_t f = 0; f < sorted.size(); ++f) {
    auto& order = sorted[f];
    order.resize(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto col = static_cast<Eigen::Index>(f);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return features(static_cast<Eigen::Index>(a), col) < features(static_cast<Eigen::Index>(b), col);
    });
  }

  BoostedTreesModel model;
  model.learning_rate = config.learning_rate;
  model.base_prediction = target.mean();
  Eigen::VectorXd residual = target.array() - model.base_prediction;
  model.train_mse.push_back(residual.squaredNorm() / static_cast<double>(rows));
  for (std::size_t round = 0; round < config.rounds; ++round) {
    TreeBuilder builder(features, residual, config);
    RegressionTree tree = builder.build(sorted);
    for (Eigen::Index r = 0; r < features.rows(); ++r) residual(r) -= config.learning_rate * tree.predict(features.row(r));
    model.trees.push_back(std::move(tree));
    model.train_mse.push_back(residual.squaredNorm() / static_cast<double>(rows));
  }
  return model;
}

BoostedTreesModel gbt_fit(const RegressionDesign& design, const GbtConfig& config) {
  return gbt_fit(design.features, design.target, config);
}

}  // namespace rankmetrics
