#pragma once

// Small helpers shared by the unit tests. Oracles live next to the tests that
// use them; this header holds only plumbing.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "blockspec/common.hpp"
#include "blockspec/graph.hpp"

namespace testing {

using namespace blockspec;

inline DirectedGraph graph_of(std::size_t n, std::vector<Edge> edges) { return build_graph(edges, n); }

/// Random graph with edge probability p and weights in [0.5, 2).
inline DirectedGraph random_graph(std::size_t n, double p, std::uint64_t seed, bool weighted = true) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && unit_uniform(rng) < p) edges.push_back({u, v, weighted ? 0.5 + 1.5 * unit_uniform(rng) : 1.0});
    }
  }
  return build_graph(edges, n);
}

/// Random strongly connected graph: a Hamiltonian cycle plus random chords.
inline DirectedGraph random_strong_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) edges.push_back({u, static_cast<NodeId>((u + 1) % n), 0.5 + unit_uniform(rng)});
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && unit_uniform(rng) < p) edges.push_back({u, v, 0.5 + 1.5 * unit_uniform(rng)});
    }
  }
  return build_graph(edges, n);
}

inline Labels random_labels(std::size_t n, std::size_t k, Rng& rng) {
  Labels l(n);
  for (auto& x : l) x = static_cast<Label>(uniform_index(rng, k));
  return l;
}

/// True when a and b induce the same partition.
inline bool same_partition(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

}  // namespace testing
