#include <algorithm>
#include <map>
#include <numeric>

#include "rankmetrics/error.hpp"
#include "rankmetrics/random.hpp"
#include "rankmetrics/structure.hpp"

namespace rankmetrics {

namespace {

// Symmetric adjacency. A diagonal entry is stored once and counted once in
// the node degree; aggregation folds every intra-community ordered pair into
// it, which keeps modularity identical across levels.
struct Adjacency {
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbors;
  std::vector<double> self_loop;
  std::vector<double> degree;
  double total = 0.0;  // 2m

  explicit Adjacency(std::size_t n) : neighbors(n), self_loop(n, 0.0), degree(n, 0.0) {}

  std::size_t size() const { return neighbors.size(); }

  void finalize() {
    total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      degree[i] = self_loop[i];
      for (const auto& [j, w] : neighbors[i]) degree[i] += w;
      total += degree[i];
    }
  }
};

Adjacency from_graph(const WeightedGraph& graph) {
  std::vector<std::map<std::size_t, double>> merged(graph.nodes);
  Adjacency adj(graph.nodes);
  for (const auto& e : graph.edges) {
    if (e.u >= graph.nodes || e.v >= graph.nodes) throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (!(e.weight >= 0.0)) throw Error(ErrorCode::InvalidArgument, "Louvain needs nonnegative edge weights");
    if (e.u == e.v) {
      adj.self_loop[e.u] += e.weight;
    } else {
      merged[e.u][e.v] += e.weight;
      merged[e.v][e.u] += e.weight;
    }
  }
  for (std::size_t i = 0; i < graph.nodes; ++i) adj.neighbors[i].assign(merged[i].begin(), merged[i].end());
  adj.finalize();
  return adj;
}

Adjacency aggregate(const Adjacency& adj, const std::vector<std::size_t>& community, std::size_t count) {
  std::vector<std::map<std::size_t, double>> merged(count);
  Adjacency out(count);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    const std::size_t ci = community[i];
    out.self_loop[ci] += adj.self_loop[i];
    for (const auto& [j, w] : adj.neighbors[i]) {
      const std::size_t cj = community[j];
      if (ci == cj) {
        out.self_loop[ci] += w;
      } else {
        merged[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) out.neighbors[c].assign(merged[c].begin(), merged[c].end());
  out.finalize();
  return out;
}

// Relabels to 0..k-1 by first appearance; returns k.
std::size_t renumber(std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::size_t> mapping;
  for (auto& l : labels) {
    auto [it, inserted] = mapping.emplace(l, mapping.size());
    l = it->second;
  }
  return mapping.size();
}

// One local-moving phase. Returns true if any node changed community.
bool move_nodes(const Adjacency& adj, std::vector<std::size_t>& community, double resolution, Rng& rng) {
  const std::size_t n = adj.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[community[i]] += adj.degree[i];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<double> link(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> touched;
  bool any_move = false;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i : order) {
      const std::size_t own = community[i];
      const double k_i = adj.degree[i];
      touched.clear();
      for (const auto& [j, w] : adj.neighbors[i]) {
        const std::size_t c = community[j];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[own] -= k_i;
      // Gain of inserting i into c, up to terms shared by every candidate.
      auto gain = [&](std::size_t c) { return link[c] - resolution * tot[c] * k_i / adj.total; };
      const double eps = 1e-12 * std::max(1.0, k_i);
      std::size_t best = own;
      double best_gain = gain(own) + eps;
      std::sort(touched.begin(), touched.end());
      for (std::size_t c : touched) {
        if (c == own) continue;
        const double g = gain(c);
        if (g > best_gain) {
          best_gain = g;
          best = c;
        }
      }
      tot[best] += k_i;
      for (std::size_t c : touched) {
        link[c] = 0.0;
        seen[c] = 0;
      }
      if (best != own) {
        community[i] = best;
        improved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

}  // namespace

std::size_t ClusterAssignment::cluster_count() const {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

WeightedGraph similarity_graph(const ComplementarityMatrix& matrix) {
  WeightedGraph graph;
  graph.nodes = matrix.size();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      const double w = 1.0 - matrix(i, j);
      if (w > 0.0) graph.edges.push_back(WeightedEdge{i, j, w});
    }
  }
  return graph;
}

double modularity(const WeightedGraph& graph, std::span<const std::size_t> labels, double resolution) {
  if (labels.size() != graph.nodes) throw Error(ErrorCode::LengthMismatch, "one label per node required");
  const Adjacency adj = from_graph(graph);
  if (adj.total == 0.0) return 0.0;
  const std::size_t count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> inside(count, 0.0);
  std::vector<double> tot(count, 0.0);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    tot[labels[i]] += adj.degree[i];
    inside[labels[i]] += adj.self_loop[i];
    for (const auto& [j, w] : adj.neighbors[i]) {
      if (labels[j] == labels[i]) inside[labels[i]] += w;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    const double share = tot[c] / adj.total;
    q += inside[c] / adj.total - resolution * share * share;
  }
  return q;
}

ClusterAssignment louvain(const WeightedGraph& graph, double resolution, std::uint64_t seed) {
  if (graph.nodes == 0) throw Error(ErrorCode::InvalidArgument, "Louvain needs a nonempty graph");
  Adjacency level = from_graph(graph);
  ClusterAssignment out;
  out.labels.resize(graph.nodes);
  std::iota(out.labels.begin(), out.labels.end(), std::size_t{0});
  out.pass_modularity.push_back(modularity(graph, out.labels, resolution));
  if (level.total == 0.0) {
    out.modularity = out.pass_modularity.back();
    return out;
  }

  Rng rng(seed);
  while (true) {
    std::vector<std::size_t> community(level.size());
    std::iota(community.begin(), community.end(), std::size_t{0});
    if (!move_nodes(level, community, resolution, rng)) break;
    const std::size_t count = renumber(community);
    for (auto& label : out.labels) label = community[label];
    out.pass_modularity.push_back(modularity(graph, out.labels, resolution));
    if (count == level.size()) break;
    level = aggregate(level, community, count);
  }
  renumber(out.labels);
  out.modularity = out.pass_modularity.back();
  return out;
}

}  // namespace rankmetrics
