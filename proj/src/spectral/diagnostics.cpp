#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blockspec/error.hpp"
#include "blockspec/kernels.hpp"
#include "blockspec/spectral.hpp"

namespace blockspec {

std::vector<double> perron_vector(const TransitionOperator& op, double tol, int max_iter) {
  if (!op.irreducible()) {
    fail(ErrorKind::InvalidArgument, "Perron vector requires an irreducible chain (graph is not strongly connected)");
  }
  const std::size_t n = op.size();
  std::vector<cplx> f(n, cplx(1.0 / static_cast<double>(n), 0.0));
  std::vector<cplx> g(n);
  // Lazy iteration f <- (f + M^T f) / 2: same fixed point, but periodic chains
  // (block-cycles) converge because only eigenvalue 1 stays on the unit circle.
  for (int it = 0; it < max_iter; ++it) {
    op.apply_transpose(f, g);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::norm(g[i] - f[i]);
    if (std::sqrt(res) <= tol) break;
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = 0.5 * (f[i] + g[i]);
      mass += f[i].real();
    }
    if (!(mass > 0.0)) fail(ErrorKind::Numerical, "Perron iteration lost all probability mass");
    for (cplx& x : f) x /= mass;
    if (it + 1 == max_iter) fail(ErrorKind::Numerical, "Perron iteration did not reach the requested tolerance");
  }
  std::vector<double> out(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::max(f[i].real(), 0.0);
    mass += out[i];
  }
  for (double& x : out) x /= mass;
  return out;
}

PerturbationReport perturbation_diagnostics(const DirectedGraph& g, const DirectedGraph& g_hat) {
  const std::size_t n = g.node_count();
  if (g_hat.node_count() != n) fail(ErrorKind::InvalidArgument, "perturbed graph has a different node count");
  for (const Edge& e : g.edges()) {
    if (g_hat.weight(e.src, e.dst) < e.weight) {
      fail(ErrorKind::InvalidArgument, "perturbed graph is missing edge (" + std::to_string(e.src) + ", " +
                                           std::to_string(e.dst) + ") of the original");
    }
  }
  if (!strongly_connected(g)) fail(ErrorKind::InvalidArgument, "original graph must be strongly connected");

  PerturbationReport report;
  for (const Edge& e : g_hat.edges()) {
    report.sigma = std::max(report.sigma, g_hat.in_degree(e.dst) / g_hat.out_degree(e.src));
  }
  for (NodeId i = 0; i < n; ++i) {
    report.rho = std::max(report.rho, (g_hat.out_degree(i) - g.out_degree(i)) / g.out_degree(i));
  }
  const auto f = perron_vector(transition_P(g));
  double sq = 0.0;
  for (double x : f) sq += x * x;
  report.perron_norm2 = std::sqrt(sq);
  report.bound_first_order = std::sqrt(2.0 * static_cast<double>(n)) * report.perron_norm2 *
                             std::sqrt(report.sigma) * std::sqrt(report.rho);
  return report;
}

double eigengap_condition(const SpectrumResult& spectrum, std::size_t l) {
  if (spectrum.pairs.size() < 2) fail(ErrorKind::InvalidArgument, "eigengap needs at least two eigenvalues");
  if (l >= spectrum.pairs.size()) fail(ErrorKind::InvalidArgument, "eigenvalue index out of range");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) {
    if (i == l) continue;
    gap = std::min(gap, std::abs(spectrum.pairs[i].value - spectrum.pairs[l].value));
  }
  return gap;
}

double drazin_norm(const TransitionOperator& op, cplx lambda, std::size_t dense_cap) {
  const DenseEigensystem sys = dense_eigensystem(op, dense_cap);
  Eigen::Index nearest = 0;
  int close = 0;
  for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
    const double d = std::abs(sys.values(i) - lambda);
    if (d < std::abs(sys.values(nearest) - lambda)) nearest = i;
    if (d < 1e-8) ++close;
  }
  if (std::abs(sys.values(nearest) - lambda) > 1e-6) {
    fail(ErrorKind::InvalidArgument, "lambda is not an eigenvalue of the operator");
  }
  if (close > 1) fail(ErrorKind::InvalidArgument, "lambda is not a simple eigenvalue");

  // Group inverse of an index-1 matrix A: A^# = (A + E)^{-1} - E, with E the
  // spectral projector x y^T / (y^T x) onto the null space of A.
  const Eigen::VectorXcd x = sys.right.col(nearest);
  const Eigen::VectorXcd y = sys.left.col(nearest);
  const cplx scale = (y.transpose() * x)(0);
  if (std::abs(scale) < 1e-14) fail(ErrorKind::Numerical, "eigenvalue is defective; Drazin inverse is ill-posed");
  const Eigen::MatrixXcd e = x * y.transpose() / scale;
  const Eigen::Index n = static_cast<Eigen::Index>(op.size());
  const Eigen::MatrixXcd a = lambda * Eigen::MatrixXcd::Identity(n, n) - op.to_dense().cast<cplx>();
  const Eigen::MatrixXcd sharp = (a + e).partialPivLu().inverse() - e;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(sharp);
  return svd.singularValues()(0);
}

}  // namespace blockspec
