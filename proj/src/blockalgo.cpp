#include "blockspec/blockalgo.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <string>

#include "blockspec/error.hpp"
#include "blockspec/transition.hpp"

namespace blockspec {

namespace {

BlockAssignment spectral_cluster(const DirectedGraph& g, const TransitionOperator& op, const char* name,
                                 std::size_t k, const SpectralOptions& opt, EigenFilter default_filter) {
  const std::size_t n = g.node_count();
  if (k < 2 || k > n) {
    fail(ErrorKind::InvalidArgument, std::string(name) + " needs 2 <= k <= n (k = " + std::to_string(k) +
                                         ", n = " + std::to_string(n) + ")");
  }
  BlockAssignment out;
  out.k = k;
  Provenance& prov = out.provenance;
  prov.algorithm = name;
  prov.seed = opt.seed;
  const EigenFilter filter = opt.filter.value_or(default_filter);
  prov.filter = filter;
  prov.strongly_connected = strongly_connected(g);
  if (!prov.strongly_connected) prov.warnings.push_back("graph is not strongly connected; exact recovery is not guaranteed");

  ArnoldiOptions ao;
  ao.k = k;
  ao.tol = opt.tol;
  ao.max_restarts = opt.max_restarts;
  ao.seed = opt.seed;
  const SpectrumResult spectrum = top_modulus_eigenpairs(op, ao);
  prov.solver_iterations = spectrum.iterations;
  prov.solver_converged = spectrum.converged;
  prov.boundary_tie = spectrum.boundary_tie;
  if (!spectrum.converged) {
    double worst = 0.0;
    for (const auto& p : spectrum.pairs) worst = std::max(worst, p.residual);
    std::ostringstream msg;
    msg << name << ": eigensolver did not converge after " << spectrum.iterations
        << " restarts (worst residual " << worst << ", tol " << opt.tol << ")";
    fail(ErrorKind::Numerical, msg.str());
  }
  if (spectrum.boundary_tie) prov.warnings.push_back("eigenvalue modulus tie at position k");

  const EmbeddingMatrix emb = build_embedding(spectrum, k, filter);
  prov.filter_fell_back = emb.filter_fell_back;
  if (emb.filter_fell_back) prov.warnings.push_back("no eigenvalue with positive imaginary part; used all k eigenvectors");
  prov.eigenvalues = emb.source_eigenvalues;

  KmeansOptions ko;
  ko.k = k;
  ko.restarts = opt.restarts;
  ko.max_iter = opt.kmeans_max_iter;
  ko.seed = derive_seed(opt.seed, 0x6B6D);
  const KmeansResult km = kmeans(emb, ko);
  prov.kmeans_restarts = km.restarts_used;
  prov.kmeans_inertia = km.inertia;
  out.labels = km.assignment;
  return out;
}

}  // namespace

BlockAssignment bcs(const DirectedGraph& g, std::size_t k, const SpectralOptions& options) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.out_degree(u) <= 0.0) {
      fail(ErrorKind::InvalidArgument, "bcs: node " + std::to_string(u) +
                                           " has zero out-degree; BCS requires every node to have an out-edge "
                                           "(use bas, which handles dangling nodes)");
    }
  }
  return spectral_cluster(g, transition_P(g), "bcs", k, options, EigenFilter::PositiveImaginary);
}

BlockAssignment bas(const DirectedGraph& g, std::size_t k, const SpectralOptions& options) {
  // Nested-cycle spectra are not conjugate images of roots of unity: the real
  // outlying eigenvalues carry block information the filter would drop.
  return spectral_cluster(g, transition_Pa(g), "bas", k, options, EigenFilter::AllK);
}

BlockAssignment rank_blocks(const DirectedGraph& g, const BlockAssignment& a) {
  const std::size_t k = a.k;
  if (k == 0) fail(ErrorKind::InvalidArgument, "rank_blocks needs k >= 1");
  if (a.labels.size() != g.node_count()) fail(ErrorKind::InvalidArgument, "label vector length differs from node count");
  for (Label l : a.labels) {
    if (l >= k) fail(ErrorKind::InvalidArgument, "label out of range 0..k-1");
  }

  // flow[s][t]: total weight from block s to block t.
  std::vector<double> flow(k * k, 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto nbr = g.out_neighbors(u);
    const auto w = g.out_weights(u);
    for (std::size_t e = 0; e < nbr.size(); ++e) flow[a.labels[u] * k + a.labels[nbr[e]]] += w[e];
  }
  std::vector<char> arc(k * k, 0);
  for (std::size_t s = 0; s < k; ++s) {
    for (std::size_t t = 0; t < k; ++t) arc[s * k + t] = s != t && flow[s * k + t] > flow[t * k + s];
  }
  auto margin = [&](std::size_t s, std::size_t t) { return flow[s * k + t] - flow[t * k + s]; };

  BlockAssignment out = a;
  for (;;) {
    std::vector<char> reach(arc);
    for (std::size_t m = 0; m < k; ++m) {
      for (std::size_t s = 0; s < k; ++s) {
        if (!reach[s * k + m]) continue;
        for (std::size_t t = 0; t < k; ++t) reach[s * k + t] |= reach[m * k + t];
      }
    }
    std::size_t best_s = k, best_t = k;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t t = 0; t < k; ++t) {
        if (arc[s * k + t] && reach[t * k + s] && margin(s, t) < best) {
          best = margin(s, t);
          best_s = s;
          best_t = t;
        }
      }
    }
    if (best_s == k) break;
    arc[best_s * k + best_t] = 0;
    out.provenance.deleted_block_edges.emplace_back(static_cast<Label>(best_s), static_cast<Label>(best_t));
  }
  if (!out.provenance.deleted_block_edges.empty()) {
    out.provenance.warnings.push_back("block graph was cyclic; removed " +
                                      std::to_string(out.provenance.deleted_block_edges.size()) +
                                      " minimum-margin block edge(s) before ranking");
  }

  std::vector<std::size_t> indeg(k, 0);
  for (std::size_t i = 0; i < k * k; ++i) {
    if (arc[i]) ++indeg[i % k];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t s = 0; s < k; ++s) {
    if (indeg[s] == 0) ready.push(s);
  }
  std::vector<Label> rank(k, 0);
  Label next = 0;
  while (!ready.empty()) {
    const std::size_t s = ready.top();
    ready.pop();
    rank[s] = next++;
    for (std::size_t t = 0; t < k; ++t) {
      if (arc[s * k + t] && --indeg[t] == 0) ready.push(t);
    }
  }
  for (Label& l : out.labels) l = rank[l];
  out.ranked = true;
  return out;
}

double acyclicity_score(const DirectedGraph& g, std::span<const Label> labels) {
  if (labels.size() != g.node_count()) fail(ErrorKind::InvalidArgument, "label vector length differs from node count");
  if (g.edge_count() == 0) return 1.0;
  std::size_t forward = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_neighbors(u)) forward += labels[u] < labels[v];
  }
  return static_cast<double>(forward) / static_cast<double>(g.edge_count());
}

double weighted_acyclicity_score(const DirectedGraph& g, std::span<const Label> labels) {
  if (labels.size() != g.node_count()) fail(ErrorKind::InvalidArgument, "label vector length differs from node count");
  double forward = 0.0, total = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto nbr = g.out_neighbors(u);
    const auto w = g.out_weights(u);
    for (std::size_t e = 0; e < nbr.size(); ++e) {
      total += w[e];
      if (labels[u] < labels[nbr[e]]) forward += w[e];
    }
  }
  return total > 0.0 ? forward / total : 1.0;
}

BlockAssignment refine_assignment(const DirectedGraph& g, const BlockAssignment& a, std::uint64_t seed) {
  if (!a.ranked) fail(ErrorKind::InvalidArgument, "refine_assignment needs a ranked assignment (run rank first)");
  if (a.labels.size() != g.node_count()) fail(ErrorKind::InvalidArgument, "label vector length differs from node count");
  BlockAssignment out = a;
  if (a.k < 2) return out;
  Labels& lab = out.labels;

  // Forward edges touching u when u sits at rank r (self-loops never count).
  auto forward_at = [&](NodeId u, long r) {
    long count = 0;
    for (NodeId v : g.out_neighbors(u)) {
      if (v != u) count += r < static_cast<long>(lab[v]);
    }
    for (NodeId w : g.in_neighbors(u)) {
      if (w != u) count += static_cast<long>(lab[w]) < r;
    }
    return count;
  };

  std::vector<NodeId> order(g.node_count());
  for (NodeId u = 0; u < order.size(); ++u) order[u] = u;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);

  const long top = static_cast<long>(a.k) - 1;
  for (NodeId u : order) {
    const long r = lab[u];
    const long here = forward_at(u, r);
    long best_gain = 0, best_rank = r;
    for (long cand : {r - 1, r + 1}) {
      if (cand < 0 || cand > top) continue;
      const long gain = forward_at(u, cand) - here;
      if (gain > best_gain) {
        best_gain = gain;
        best_rank = cand;
      }
    }
    lab[u] = static_cast<Label>(best_rank);
  }
  return out;
}

double inversion_error(std::span<const Label> labels, std::span<const double> scores) {
  const std::size_t n = labels.size();
  if (scores.size() != n) fail(ErrorKind::InvalidArgument, "labels and scores differ in length");
  if (n < 2) fail(ErrorKind::InvalidArgument, "inversion error needs at least two nodes");

  // Sorted by (label, score), a pair is inverted exactly when an earlier
  // element has a strictly larger score and a strictly smaller label; equal
  // labels are already in score order, so strict inversions of the score
  // sequence count exactly those pairs.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return labels[x] != labels[y] ? labels[x] < labels[y] : scores[x] < scores[y];
  });
  std::vector<double> seq(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) seq[i] = scores[idx[i]];

  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, o = lo;
      while (i < mid && j < hi) {
        if (seq[j] < seq[i]) {
          inversions += mid - i;
          buf[o++] = seq[j++];
        } else {
          buf[o++] = seq[i++];
        }
      }
      while (i < mid) buf[o++] = seq[i++];
      while (j < hi) buf[o++] = seq[j++];
    }
    seq.swap(buf);
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return static_cast<double>(inversions) / pairs;
}

}  // namespace blockspec
