#include "blockspec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "blockspec/error.hpp"

namespace blockspec {

DirectedGraph DirectedGraph::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<Edge> sorted(edges.begin(), edges.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  DirectedGraph g;
  g.out_offsets_.assign(n + 1, 0);
  g.out_degree_.assign(n, 0.0);
  g.in_degree_.assign(n, 0.0);
  g.out_targets_.reserve(sorted.size());
  g.out_w_.reserve(sorted.size());

  for (std::size_t i = 0; i < sorted.size();) {
    const Edge& e = sorted[i];
    double w = 0.0;
    std::size_t j = i;
    for (; j < sorted.size() && sorted[j].src == e.src && sorted[j].dst == e.dst; ++j) w += sorted[j].weight;
    g.out_targets_.push_back(e.dst);
    g.out_w_.push_back(w);
    ++g.out_offsets_[e.src + 1];
    i = j;
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());

  // Column-compressed copy: counting sort by destination keeps sources ordered.
  g.in_offsets_.assign(n + 1, 0);
  for (NodeId v : g.out_targets_) ++g.in_offsets_[v + 1];
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  g.in_sources_.resize(g.out_targets_.size());
  g.in_w_.resize(g.out_targets_.size());
  std::vector<std::size_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (NodeId u = 0; u < n; ++u) {
    for (std::size_t p = g.out_offsets_[u]; p < g.out_offsets_[u + 1]; ++p) {
      const std::size_t slot = cursor[g.out_targets_[p]]++;
      g.in_sources_[slot] = u;
      g.in_w_[slot] = g.out_w_[p];
    }
  }

  for (NodeId u = 0; u < n; ++u) {
    double s = 0.0;
    for (double w : g.out_weights(u)) s += w;
    g.out_degree_[u] = s;
    double t = 0.0;
    for (double w : g.in_weights(u)) t += w;
    g.in_degree_[u] = t;
  }
  return g;
}

double DirectedGraph::weight(NodeId u, NodeId v) const {
  const auto targets = out_neighbors(u);
  const auto it = std::lower_bound(targets.begin(), targets.end(), v);
  if (it == targets.end() || *it != v) return 0.0;
  return out_weights(u)[static_cast<std::size_t>(it - targets.begin())];
}

std::vector<Edge> DirectedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    const auto targets = out_neighbors(u);
    const auto weights = out_weights(u);
    for (std::size_t p = 0; p < targets.size(); ++p) out.push_back({u, targets[p], weights[p]});
  }
  return out;
}

DirectedGraph build_graph(std::span<const Edge> edges, std::size_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "graph must have at least one node");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.src >= n || e.dst >= n) {
      fail(ErrorKind::InvalidArgument, "edge " + std::to_string(i) + " (" + std::to_string(e.src) + ", " +
                                           std::to_string(e.dst) + ") has an endpoint outside 0.." +
                                           std::to_string(n - 1));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      fail(ErrorKind::InvalidArgument, "edge " + std::to_string(i) + " has non-positive weight");
    }
  }
  return DirectedGraph::from_edges(n, edges);
}

DirectedGraph asymmetric_part(const DirectedGraph& g) {
  std::vector<Edge> kept;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto targets = g.out_neighbors(u);
    const auto weights = g.out_weights(u);
    for (std::size_t p = 0; p < targets.size(); ++p) {
      const double net = weights[p] - g.weight(targets[p], u);
      if (net > 0.0) kept.push_back({u, targets[p], net});
    }
  }
  return DirectedGraph::from_edges(g.node_count(), kept);
}

std::vector<bool> reachable_from(const DirectedGraph& g, std::span<const NodeId> start, bool reverse) {
  std::vector<bool> seen(g.node_count(), false);
  std::deque<NodeId> queue;
  for (NodeId s : start) {
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : reverse ? g.in_neighbors(u) : g.out_neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

bool strongly_connected(const DirectedGraph& g) {
  if (g.node_count() == 0) return false;
  const NodeId root = 0;
  const auto all = [](const std::vector<bool>& s) { return std::all_of(s.begin(), s.end(), [](bool b) { return b; }); };
  return all(reachable_from(g, {&root, 1}, false)) && all(reachable_from(g, {&root, 1}, true));
}

}  // namespace blockspec
