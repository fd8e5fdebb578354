#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "blockspec/common.hpp"

namespace blockspec {

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;
};

/// Immutable weighted directed graph on nodes 0..n-1.
///
/// Edges are stored twice: row-compressed by source (sorted by destination)
/// and column-compressed by destination (sorted by source). Stored weights
/// are strictly positive. Degree caches are sums in storage order, so
/// recomputing them in the same order reproduces them bit-for-bit.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Duplicate (src, dst) pairs are merged by summing their weights.
  static DirectedGraph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return out_degree_.size(); }
  std::size_t edge_count() const noexcept { return out_targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
  }
  std::span<const double> out_weights(NodeId u) const {
    return {out_w_.data() + out_offsets_[u], out_w_.data() + out_offsets_[u + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  std::span<const double> in_weights(NodeId v) const {
    return {in_w_.data() + in_offsets_[v], in_w_.data() + in_offsets_[v + 1]};
  }

  double out_degree(NodeId u) const { return out_degree_[u]; }
  double in_degree(NodeId v) const { return in_degree_[v]; }
  std::span<const double> out_degrees() const noexcept { return out_degree_; }
  std::span<const double> in_degrees() const noexcept { return in_degree_; }

  /// Weight of (u, v), or 0 when absent.
  double weight(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return weight(u, v) > 0.0; }

  /// All edges in (src, dst) order.
  std::vector<Edge> edges() const;

  /// Row-compressed layout, exposed for the transition operators.
  std::span<const std::size_t> out_offsets() const noexcept { return out_offsets_; }
  std::span<const NodeId> out_targets() const noexcept { return out_targets_; }
  std::span<const double> out_weight_values() const noexcept { return out_w_; }
  std::span<const std::size_t> in_offsets() const noexcept { return in_offsets_; }
  std::span<const NodeId> in_sources() const noexcept { return in_sources_; }
  std::span<const double> in_weight_values() const noexcept { return in_w_; }

 private:
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<double> out_w_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
  std::vector<double> in_w_;
  std::vector<double> out_degree_;
  std::vector<double> in_degree_;
};

/// Validates endpoints and weights, then builds the graph.
DirectedGraph build_graph(std::span<const Edge> edges, std::size_t n);

/// W <- (W - W^T)_+ : keeps only the net flow of every reciprocal pair.
DirectedGraph asymmetric_part(const DirectedGraph& g);

bool strongly_connected(const DirectedGraph& g);

/// Nodes reachable from `start` following edges forward (or backward).
std::vector<bool> reachable_from(const DirectedGraph& g, std::span<const NodeId> start, bool reverse);

}  // namespace blockspec
