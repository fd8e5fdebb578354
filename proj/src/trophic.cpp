#include "blockspec/blockalgo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "blockspec/error.hpp"
#include "blockspec/transition.hpp"

namespace blockspec {

namespace {

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    fail(ErrorKind::InvalidArgument, "dense trophic solve on " + std::to_string(n) + " nodes exceeds the dense cap " +
                                         std::to_string(cap));
  }
}

// Minimum-norm least squares for (I - D) T = 1, sources pinned at 1.
std::vector<double> diet_dense(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (NodeId i = 0; i < n; ++i) {
    const double din = g.in_degree(i);
    if (din <= 0.0) continue;
    const auto src = g.in_neighbors(i);
    const auto w = g.in_weights(i);
    for (std::size_t e = 0; e < src.size(); ++e) a(i, src[e]) -= w[e] / din;
  }
  const Eigen::VectorXd t = a.completeOrthogonalDecomposition().solve(rhs);
  return {t.data(), t.data() + t.size()};
}

}  // namespace

TrophicResult trophic_levels(const DirectedGraph& g, TrophicMode mode, std::size_t dense_cap) {
  const std::size_t n = g.node_count();
  TrophicResult out;
  out.mode = mode;

  if (mode == TrophicMode::PaperMatrix) {
    check_cap(n, dense_cap);
    const Eigen::MatrixXd p = transition_P(g).to_dense();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p.rows(), p.cols()) - p.transpose();
    const Eigen::VectorXd t = a.completeOrthogonalDecomposition().solve(Eigen::VectorXd::Ones(p.rows()));
    out.levels.assign(t.data(), t.data() + t.size());
    return out;
  }

  // Jacobi sweeps converge in (longest path + 1) sweeps on acyclic webs and
  // geometrically when every cycle leaks to a source.
  std::vector<double> t(n, 1.0), next(n);
  const int max_sweeps = static_cast<int>(std::min<std::size_t>(20 * n + 1000, 200000));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    bool finite = true;
    for (NodeId i = 0; i < n; ++i) {
      const double din = g.in_degree(i);
      if (din <= 0.0) {
        next[i] = 1.0;
        continue;
      }
      const auto src = g.in_neighbors(i);
      const auto w = g.in_weights(i);
      double acc = 0.0;
      for (std::size_t e = 0; e < src.size(); ++e) acc += t[src[e]] * w[e];
      next[i] = 1.0 + acc / din;
      change = std::max(change, std::abs(next[i] - t[i]) / std::max(1.0, std::abs(next[i])));
      finite = finite && std::isfinite(next[i]) && std::abs(next[i]) < 1e12;
    }
    t.swap(next);
    if (!finite) break;
    if (change <= 1e-14) {
      out.levels = std::move(t);
      return out;
    }
  }
  check_cap(n, dense_cap);
  out.levels = diet_dense(g);
  out.used_fallback = true;
  return out;
}

}  // namespace blockspec
