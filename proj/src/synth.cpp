#include "blockspec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "blockspec/error.hpp"

namespace blockspec {

void validate(const SbmParams& params) {
  if (params.k == 0) fail(ErrorKind::InvalidArgument, "SBM needs k >= 1");
  if (params.rho.size() != params.k) fail(ErrorKind::InvalidArgument, "rho must have k entries");
  if (params.prob.size() != params.k * params.k) fail(ErrorKind::InvalidArgument, "P must be k x k");
  double sum = 0.0;
  for (double r : params.rho) {
    if (!(r >= 0.0)) fail(ErrorKind::InvalidArgument, "rho entries must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "rho must sum to 1 (got " + std::to_string(sum) + ")");
  for (double p : params.prob) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::InvalidArgument, "P entries must lie in [0, 1]");
  }
}

namespace {

Labels draw_labels(const std::vector<double>& rho, std::size_t n, Rng& rng) {
  const std::size_t k = rho.size();
  std::vector<double> cdf(k);
  std::partial_sum(rho.begin(), rho.end(), cdf.begin());
  Labels tau(n);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::size_t> sizes(k, 0);
    for (auto& t : tau) {
      const double r = unit_uniform(rng) * cdf.back();
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
      t = static_cast<Label>(std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), k - 1));
      ++sizes[t];
    }
    if (std::find(sizes.begin(), sizes.end(), 0) == sizes.end()) return tau;
  }
  fail(ErrorKind::InvalidArgument, "could not draw labels with every block non-empty; check rho and n");
}

void sample_edges(const SbmParams& params, std::span<const Label> tau_src, std::span<const Label> tau_dst,
                  NodeId src_offset, NodeId dst_offset, double scale, bool skip_diagonal, Rng& rng,
                  std::vector<Edge>& out) {
  for (std::size_t u = 0; u < tau_src.size(); ++u) {
    for (std::size_t v = 0; v < tau_dst.size(); ++v) {
      if (skip_diagonal && u == v) continue;
      const double p = scale * params.at(tau_src[u], tau_dst[v]);
      if (p <= 0.0) continue;
      if (unit_uniform(rng) < p) {
        out.push_back({static_cast<NodeId>(src_offset + u), static_cast<NodeId>(dst_offset + v), 1.0});
      }
    }
  }
}

std::vector<std::size_t> partial_shuffle(std::size_t count, std::size_t take, Rng& rng) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + uniform_index(rng, count - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  return idx;
}

LabeledGraph append_edges(const LabeledGraph& base, const std::vector<std::pair<NodeId, NodeId>>& pool,
                          std::size_t extra, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges = base.graph.edges();
  for (std::size_t i : partial_shuffle(pool.size(), extra, rng)) edges.push_back({pool[i].first, pool[i].second, 1.0});
  return {build_graph(edges, base.graph.node_count()), base.tau, base.k};
}

}  // namespace

LabeledGraph sample_sbm(const SbmParams& params, std::size_t n, std::uint64_t seed) {
  validate(params);
  if (n < params.k) fail(ErrorKind::InvalidArgument, "SBM needs n >= k");
  Rng rng(seed);
  LabeledGraph out;
  out.k = params.k;
  out.tau = draw_labels(params.rho, n, rng);
  std::vector<Edge> edges;
  sample_edges(params, out.tau, out.tau, 0, 0, 1.0, true, rng, edges);
  out.graph = build_graph(edges, n);
  return out;
}

SbmParams cycle_params(std::size_t k, double p, std::vector<double> rho) {
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::InvalidArgument, "cycle probability must lie in (0, 1]");
  SbmParams s{k, std::move(rho), std::vector<double>(k * k, 0.0)};
  for (std::size_t b = 0; b < k; ++b) s.at(b, (b + 1) % k) = p;
  validate(s);
  return s;
}

SbmParams acyclic_params(std::size_t k, double p, std::vector<double> rho) {
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::InvalidArgument, "acyclic probability must lie in (0, 1]");
  SbmParams s{k, std::move(rho), std::vector<double>(k * k, 0.0)};
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) s.at(a, b) = p;
  }
  validate(s);
  return s;
}

std::vector<double> benchmark_rho() {
  const double total = std::accumulate(kBenchmarkRhoRaw.begin(), kBenchmarkRhoRaw.end(), 0.0);
  std::vector<double> rho(kBenchmarkRhoRaw.begin(), kBenchmarkRhoRaw.end());
  for (double& r : rho) r /= total;
  return rho;
}

std::vector<double> uniform_rho(std::size_t k) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "k must be positive");
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

SbmParams perturbation_params(std::size_t k, double epsilon, std::uint64_t seed, std::vector<double> rho) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in [0, 1]");
  Rng rng(seed);
  SbmParams s{k, std::move(rho), std::vector<double>(k * k)};
  for (double& q : s.prob) q = epsilon * unit_uniform(rng);
  validate(s);
  return s;
}

LabeledGraph union_perturb(const LabeledGraph& base, const SbmParams& noise, std::uint64_t seed) {
  const LabeledGraph extra = sample_sbm(noise, base.graph.node_count(), seed);
  std::vector<Edge> edges = base.graph.edges();
  for (const Edge& e : extra.graph.edges()) {
    if (!base.graph.has_edge(e.src, e.dst)) edges.push_back(e);
  }
  return {build_graph(edges, base.graph.node_count()), base.tau, base.k};
}

LabeledGraph combine_twin_sbm(const SbmParams& params, std::size_t n_each, double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in [0, 1]");
  const LabeledGraph g1 = sample_sbm(params, n_each, derive_seed(seed, 0));
  const LabeledGraph g2 = sample_sbm(params, n_each, derive_seed(seed, 1));
  std::vector<Edge> edges = g1.graph.edges();
  const auto offset = static_cast<NodeId>(n_each);
  for (Edge e : g2.graph.edges()) {
    e.src += offset;
    e.dst += offset;
    edges.push_back(e);
  }
  Rng rng(derive_seed(seed, 2));
  sample_edges(params, g1.tau, g2.tau, 0, offset, alpha, false, rng, edges);
  sample_edges(params, g2.tau, g1.tau, offset, 0, alpha, false, rng, edges);

  LabeledGraph out;
  out.k = params.k;
  out.tau = g1.tau;
  out.tau.insert(out.tau.end(), g2.tau.begin(), g2.tau.end());
  out.graph = build_graph(edges, 2 * n_each);
  return out;
}

LabeledGraph nested_block_cycle(std::size_t k, std::size_t n, double p_cycle, std::size_t extra_edges,
                                std::uint64_t seed) {
  const SbmParams params = cycle_params(k, p_cycle, uniform_rho(k));
  // BCS needs every out-degree positive, so sparse draws are repeated until the
  // base cycle is strongly connected.
  LabeledGraph base;
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt == 1000) fail(ErrorKind::InvalidArgument, "no strongly connected block-cycle after 1000 draws; raise p_cycle");
    base = sample_sbm(params, n, derive_seed(seed, attempt));
    if (strongly_connected(base.graph)) break;
  }
  if (extra_edges == 0) return base;

  const Label last = static_cast<Label>(k - 1);
  std::vector<std::pair<NodeId, NodeId>> pool;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v || base.graph.has_edge(u, v)) continue;
      if (base.tau[u] < base.tau[v] || base.tau[u] == last) pool.emplace_back(u, v);
    }
  }
  if (extra_edges > pool.size()) {
    fail(ErrorKind::InvalidArgument, "requested " + std::to_string(extra_edges) + " nested edges but only " +
                                         std::to_string(pool.size()) + " legal pairs are absent");
  }
  return append_edges(base, pool, extra_edges, derive_seed(seed, 0xA11E));
}

LabeledGraph random_edge_perturb(const LabeledGraph& base, std::size_t extra_edges, std::uint64_t seed) {
  const std::size_t n = base.graph.node_count();
  std::vector<std::pair<NodeId, NodeId>> pool;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && !base.graph.has_edge(u, v)) pool.emplace_back(u, v);
    }
  }
  if (extra_edges > pool.size()) {
    fail(ErrorKind::InvalidArgument, "requested " + std::to_string(extra_edges) + " edges but only " +
                                         std::to_string(pool.size()) + " pairs are absent");
  }
  return append_edges(base, pool, extra_edges, seed);
}

LabeledGraph weighted_block_cycle(std::size_t k, std::size_t n, double density, std::uint64_t seed) {
  if (k < 2 || n < k) fail(ErrorKind::InvalidArgument, "weighted block-cycle needs 2 <= k <= n");
  if (!(density >= 0.0 && density <= 1.0)) fail(ErrorKind::InvalidArgument, "density must lie in [0, 1]");
  auto weight = [](Rng& rng) { return 0.5 + 1.5 * unit_uniform(rng); };
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    LabeledGraph out;
    out.k = k;
    out.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.tau[i] = static_cast<Label>(i < k ? i : uniform_index(rng, k));
    }
    for (std::size_t i = n - 1; i > 0; --i) std::swap(out.tau[i], out.tau[uniform_index(rng, i + 1)]);

    std::vector<std::vector<NodeId>> members(k);
    for (NodeId u = 0; u < n; ++u) members[out.tau[u]].push_back(u);
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < k; ++b) {
      const auto& from = members[b];
      const auto& to = members[(b + 1) % k];
      for (NodeId u : from) edges.push_back({u, to[uniform_index(rng, to.size())], weight(rng)});
      for (NodeId v : to) edges.push_back({from[uniform_index(rng, from.size())], v, weight(rng)});
      for (NodeId u : from) {
        for (NodeId v : to) {
          if (unit_uniform(rng) < density) edges.push_back({u, v, weight(rng)});
        }
      }
    }
    out.graph = build_graph(edges, n);
    if (strongly_connected(out.graph)) return out;
  }
  fail(ErrorKind::InvalidArgument, "no strongly connected weighted block-cycle after 1000 draws");
}

}  // namespace blockspec
