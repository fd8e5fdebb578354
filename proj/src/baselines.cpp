#include "blockspec/baselines.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "blockspec/clusterkit.hpp"
#include "blockspec/error.hpp"

namespace blockspec {

namespace {

Eigen::MatrixXd dense_weights(const DirectedGraph& g, std::size_t cap) {
  const std::size_t n = g.node_count();
  if (n > cap) {
    fail(ErrorKind::InvalidArgument, "baseline needs a dense " + std::to_string(n) + " x " + std::to_string(n) +
                                         " matrix, over the dense cap " + std::to_string(cap));
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (NodeId u = 0; u < n; ++u) {
    const auto nbr = g.out_neighbors(u);
    const auto wt = g.out_weights(u);
    for (std::size_t e = 0; e < nbr.size(); ++e) w(u, nbr[e]) = wt[e];
  }
  return w;
}

void check_k(const char* name, std::size_t k, std::size_t n) {
  if (k < 2 || k > n) {
    fail(ErrorKind::InvalidArgument, std::string(name) + " needs 2 <= k <= n (k = " + std::to_string(k) +
                                         ", n = " + std::to_string(n) + ")");
  }
}

BlockAssignment cluster_rows(const char* name, const PointSet& pts, std::size_t k, const BaselineOptions& opt) {
  KmeansOptions ko;
  ko.k = k;
  ko.restarts = opt.restarts;
  ko.max_iter = opt.kmeans_max_iter;
  ko.seed = derive_seed(opt.seed, 0x6B6D);
  const KmeansResult km = kmeans(pts, ko);
  BlockAssignment out;
  out.k = k;
  out.labels = km.assignment;
  out.provenance.algorithm = name;
  out.provenance.seed = opt.seed;
  out.provenance.kmeans_restarts = km.restarts_used;
  out.provenance.kmeans_inertia = km.inertia;
  return out;
}

}  // namespace

SymmetricGraph bibliometric_symmetrization(const DirectedGraph& g, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in [0, 1]");
  const Eigen::MatrixXd w = dense_weights(g, std::numeric_limits<std::size_t>::max());
  SymmetricGraph s;
  s.n = g.node_count();
  s.weights = (1.0 - alpha) * (w.transpose() * w) + alpha * (w * w.transpose());
  // Products round asymmetrically; mirror the upper triangle.
  const Eigen::MatrixXd upper_t = s.weights.transpose();
  s.weights.triangularView<Eigen::StrictlyLower>() = upper_t;
  return s;
}

Eigen::MatrixXd normalized_laplacian(const SymmetricGraph& s) {
  const Eigen::Index n = static_cast<Eigen::Index>(s.n);
  const Eigen::VectorXd d = s.weights.rowwise().sum();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    if (d(u) <= 0.0) continue;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (u == v) {
        l(u, u) = 1.0 - s.weights(u, u) / d(u);
      } else if (s.weights(u, v) != 0.0 && d(v) > 0.0) {
        l(u, v) = -s.weights(u, v) / std::sqrt(d(u) * d(v));
      }
    }
  }
  return l;
}

BlockAssignment bib_cluster(const DirectedGraph& g, std::size_t k, double alpha, const BaselineOptions& options) {
  check_k("bib", k, g.node_count());
  if (g.node_count() > options.dense_cap) {
    fail(ErrorKind::InvalidArgument, "bib: " + std::to_string(g.node_count()) + " nodes exceeds the dense cap " +
                                         std::to_string(options.dense_cap));
  }
  const Eigen::MatrixXd l = normalized_laplacian(bibliometric_symmetrization(g, alpha));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(l);
  if (eig.info() != Eigen::Success) fail(ErrorKind::Numerical, "bib: symmetric eigensolver failed");
  PointSet pts;
  pts.count = g.node_count();
  pts.dim = k;
  pts.values.resize(pts.count * k);
  for (std::size_t i = 0; i < pts.count; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      pts.values[i * k + j] = eig.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return cluster_rows("bib", pts, k, options);
}

SvdEmbedding svd_embedding(const DirectedGraph& g, std::size_t d, std::size_t dense_cap) {
  const std::size_t n = g.node_count();
  if (d < 1 || d > n) fail(ErrorKind::InvalidArgument, "svd needs 1 <= d <= n");
  const Eigen::MatrixXd w = dense_weights(g, dense_cap);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();

  const double floor = s(0) * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  std::size_t used = 0;
  while (used < d && s(static_cast<Eigen::Index>(used)) > floor) ++used;

  SvdEmbedding out;
  out.singular_values.assign(s.data(), s.data() + used);
  PointSet& pts = out.points;
  pts.count = n;
  pts.dim = 2 * used;
  pts.values.resize(n * pts.dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < used; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double scale = std::sqrt(s(jj));
      pts.values[i * pts.dim + j] = svd.matrixU()(static_cast<Eigen::Index>(i), jj) * scale;
      pts.values[i * pts.dim + used + j] = svd.matrixV()(static_cast<Eigen::Index>(i), jj) * scale;
    }
  }
  return out;
}

BlockAssignment svd_cluster(const DirectedGraph& g, std::size_t d, std::size_t k, const BaselineOptions& options) {
  check_k("svd", k, g.node_count());
  const SvdEmbedding emb = svd_embedding(g, d, options.dense_cap);
  const std::size_t used = emb.singular_values.size();
  if (used == 0) fail(ErrorKind::Numerical, "svd: adjacency matrix is zero");
  BlockAssignment out = cluster_rows("svd", emb.points, k, options);
  if (used < d) {
    out.provenance.warnings.push_back("svd: only " + std::to_string(used) + " of " + std::to_string(d) +
                                      " singular values are numerically nonzero");
  }
  return out;
}

}  // namespace blockspec
