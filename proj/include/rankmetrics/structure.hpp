#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rankmetrics/complementarity.hpp"
#include "rankmetrics/ranking.hpp"
#include "rankmetrics/scoreset.hpp"

namespace rankmetrics {

// One Borda representation per row: N columns at system level, K at
// utterance level.
struct MetricMatrix {
  std::vector<std::string> metric_ids;
  std::vector<MetricKind> kinds;
  Level level = Level::System;
  Eigen::MatrixXd data;
};

MetricMatrix build_metric_matrix(const ScoreTensor& tensor, Level level);

struct PcaResult {
  bool standardized = false;
  // Variance along each component and its share of the total. Ratios sum to
  // 1 and never increase.
  std::vector<double> eigenvalues;
  std::vector<double> explained_ratio;
  // Orthonormal components, one per column, in the space of kept columns.
  // The largest-magnitude coordinate of every component is positive.
  Eigen::MatrixXd components;
  // Row projections onto every component, and onto the first two (padded
  // with zeros when fewer than two components exist).
  Eigen::MatrixXd scores;
  Eigen::MatrixXd scores2d;
  // Input columns actually used; standardization drops constant ones.
  std::vector<std::size_t> kept_columns;
  std::vector<std::size_t> dropped_columns;
  Eigen::VectorXd center;
  Eigen::VectorXd scale;

  // The centered (and scaled) kept columns, i.e. what scores * components^T
  // reconstructs.
  Eigen::MatrixXd prepared;
};

// Exact symmetric eigendecomposition of the column covariance. When there are
// more columns than rows the equivalent row Gram matrix is decomposed and only
// components of positive variance are kept.
PcaResult pca(const Eigen::MatrixXd& data, bool standardize);
PcaResult pca(const MetricMatrix& matrix, bool standardize);

// Smallest d whose cumulative explained ratio reaches `threshold`.
std::size_t effective_dimension(std::span<const double> ratios, double threshold = 0.8);

struct WeightedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;
};

// Undirected graph; an edge with u == v sets the diagonal adjacency entry.
struct WeightedGraph {
  std::size_t nodes = 0;
  std::vector<WeightedEdge> edges;
};

// Complete graph over the matrix's metrics with weight 1 - C; zero-weight
// edges are left out.
WeightedGraph similarity_graph(const ComplementarityMatrix& matrix);

struct ClusterAssignment {
  // Cluster index per node, contiguous from 0 in order of first appearance.
  std::vector<std::size_t> labels;
  double modularity = 0.0;
  // Modularity of the singleton partition, then after every aggregation pass.
  std::vector<double> pass_modularity;

  std::size_t cluster_count() const;
};

double modularity(const WeightedGraph& graph, std::span<const std::size_t> labels, double resolution = 1.0);

// Two-phase Louvain iterated until a pass moves no node. The seed permutes
// the node visit order; equal gains go to the lowest community index.
ClusterAssignment louvain(const WeightedGraph& graph, double resolution = 1.0, std::uint64_t seed = 0);

}  // namespace rankmetrics
