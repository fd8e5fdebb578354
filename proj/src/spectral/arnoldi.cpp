// Krylov-Schur restarted Arnoldi for the largest-modulus eigenpairs of a
// transition operator. Complex arithmetic throughout; the small projected
// problem is handled by Eigen's complex Schur factorization, then reordered
// with Givens swaps so that wanted Ritz values lead the diagonal.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blockspec/error.hpp"
#include "blockspec/kernels.hpp"
#include "blockspec/spectral.hpp"

namespace blockspec {
namespace {

using Index = Eigen::Index;

// Column-major n x cols basis.
class Basis {
 public:
  Basis(std::size_t n, std::size_t cols) : n_(n), data_(n * cols) {}
  std::span<cplx> col(std::size_t j) { return {data_.data() + j * n_, n_}; }
  std::span<const cplx> col(std::size_t j) const { return {data_.data() + j * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<cplx> data_;
};

// Orthogonalizes w against columns [0, count) with two classical Gram-Schmidt
// passes; accumulates the coefficients into h (if given).
void orthogonalize(const Basis& v, std::size_t count, std::span<cplx> w, cplx* h) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < count; ++i) {
      const cplx c = kernels::dot(v.col(i), w);
      kernels::axpy(-c, v.col(i), w);
      if (h) h[i] += c;
    }
  }
}

// Exchanges diagonal entries k and k+1 of the upper-triangular t while keeping
// A = q t q^H.
void swap_schur(Eigen::MatrixXcd& t, Eigen::MatrixXcd& q, Index k) {
  const cplx a = t(k, k);
  const cplx b = t(k + 1, k + 1);
  const cplx x1 = t(k, k + 1);
  const cplx x2 = b - a;
  const double nrm = std::hypot(std::abs(x1), std::abs(x2));
  if (nrm == 0.0) return;
  const cplx c = x1 / nrm;
  const cplx s = x2 / nrm;
  // g = [[c, -conj(s)], [s, conj(c)]]; its first column is the eigenvector of b.
  const Index m = t.rows();
  for (Index r = 0; r < m; ++r) {
    const cplx u = t(r, k);
    const cplx w = t(r, k + 1);
    t(r, k) = u * c + w * s;
    t(r, k + 1) = -u * std::conj(s) + w * std::conj(c);
  }
  for (Index col = 0; col < m; ++col) {
    const cplx u = t(k, col);
    const cplx w = t(k + 1, col);
    t(k, col) = std::conj(c) * u + std::conj(s) * w;
    t(k + 1, col) = -s * u + c * w;
  }
  for (Index r = 0; r < q.rows(); ++r) {
    const cplx u = q(r, k);
    const cplx w = q(r, k + 1);
    q(r, k) = u * c + w * s;
    q(r, k + 1) = -u * std::conj(s) + w * std::conj(c);
  }
  t(k + 1, k) = 0.0;
  t(k, k) = b;
  t(k + 1, k + 1) = a;
}

void sort_schur_by_modulus(Eigen::MatrixXcd& t, Eigen::MatrixXcd& q) {
  const Index m = t.rows();
  for (Index i = 0; i < m; ++i) {
    Index best = i;
    for (Index j = i + 1; j < m; ++j) {
      if (std::abs(t(j, j)) > std::abs(t(best, best))) best = j;
    }
    for (Index p = best - 1; p >= i; --p) swap_schur(t, q, p);
  }
}

// Eigenvector of the leading (i+1) x (i+1) block of upper-triangular t for
// eigenvalue t(i, i), zero-padded to length m.
Eigen::VectorXcd triangular_eigenvector(const Eigen::MatrixXcd& t, Index i) {
  const Index m = t.rows();
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(m);
  s(i) = 1.0;
  const cplx theta = t(i, i);
  const double scale = std::max(t.cwiseAbs().maxCoeff(), 1.0);
  const double floor = std::numeric_limits<double>::epsilon() * scale;
  for (Index j = i - 1; j >= 0; --j) {
    cplx acc = 0.0;
    for (Index l = j + 1; l <= i; ++l) acc += t(j, l) * s(l);
    cplx den = t(j, j) - theta;
    if (std::abs(den) < floor) den = floor;
    s(j) = -acc / den;
  }
  return s / s.norm();
}

void normalize_phase(std::vector<cplx>& v) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best * (1.0 + 1e-12)) {
      best = a;
      arg = i;
    }
  }
  if (best <= 0.0) return;
  const cplx phase = std::conj(v[arg]) / std::abs(v[arg]);
  for (cplx& x : v) x *= phase;
}

double residual_norm(const TransitionOperator& op, const std::vector<cplx>& v, cplx lambda) {
  std::vector<cplx> av(v.size());
  op.apply(v, av);
  kernels::axpy(-lambda, v, av);
  return std::sqrt(kernels::norm_sq(av));
}

}  // namespace

SpectrumResult top_modulus_eigenpairs(const TransitionOperator& op, const ArnoldiOptions& options) {
  const std::size_t n = op.size();
  const std::size_t k = options.k;
  if (k < 1 || k > n) {
    fail(ErrorKind::InvalidArgument, "requested " + std::to_string(k) + " eigenpairs of an operator of size " +
                                         std::to_string(n));
  }
  if (!(options.tol > 0.0)) fail(ErrorKind::InvalidArgument, "eigensolver tolerance must be positive");

  std::size_t m = options.subspace ? options.subspace : std::max<std::size_t>(2 * k + 10, 30);
  m = std::min(std::max(m, k + 1), n);
  const Index mi = static_cast<Index>(m);

  Basis v(n, m + 1);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(mi + 1, mi);

  Rng rng(options.seed);
  auto random_fill = [&](std::span<cplx> x) {
    for (cplx& e : x) {
      const double re = 2.0 * unit_uniform(rng) - 1.0;
      const double im = 2.0 * unit_uniform(rng) - 1.0;
      e = {re, im};
    }
  };
  random_fill(v.col(0));
  {
    const double nrm = std::sqrt(kernels::norm_sq(v.col(0)));
    for (cplx& e : v.col(0)) e /= nrm;
  }

  std::size_t start = 0;  // columns [0, start] of v are valid on entry to expansion
  std::vector<cplx> coeffs(m + 1);
  SpectrumResult result;
  Eigen::MatrixXcd t;
  Eigen::MatrixXcd q;
  std::size_t want = k;
  double beta_last = 0.0;

  for (int restart = 0;; ++restart) {
    for (std::size_t j = start; j < m; ++j) {
      std::span<cplx> w = v.col(j + 1);
      op.apply(v.col(j), w);
      const double before = std::sqrt(kernels::norm_sq(w));
      std::fill(coeffs.begin(), coeffs.end(), cplx{});
      orthogonalize(v, j + 1, w, coeffs.data());
      for (std::size_t i = 0; i <= j; ++i) h(static_cast<Index>(i), static_cast<Index>(j)) = coeffs[i];
      double beta = std::sqrt(kernels::norm_sq(w));
      if (beta <= 1e-12 * std::max(before, 1e-300)) {
        // Invariant subspace found: continue with a fresh direction.
        beta = 0.0;
        if (j + 1 < n) {
          random_fill(w);
          orthogonalize(v, j + 1, w, nullptr);
          const double nrm = std::sqrt(kernels::norm_sq(w));
          for (cplx& e : w) e /= nrm;
        } else {
          std::fill(w.begin(), w.end(), cplx{});
        }
      } else {
        for (cplx& e : w) e /= beta;
      }
      h(static_cast<Index>(j + 1), static_cast<Index>(j)) = beta;
    }

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(h.topLeftCorner(mi, mi));
    if (schur.info() != Eigen::Success) fail(ErrorKind::Numerical, "Schur factorization of the Krylov matrix failed");
    t = schur.matrixT().triangularView<Eigen::Upper>();
    q = schur.matrixU();
    sort_schur_by_modulus(t, q);
    beta_last = std::abs(h(mi, mi - 1));
    const Eigen::RowVectorXcd b = h(mi, mi - 1) * q.row(mi - 1);

    want = k;
    while (want + 1 < m && std::abs(t(static_cast<Index>(want) - 1, static_cast<Index>(want) - 1)) -
                               std::abs(t(static_cast<Index>(want), static_cast<Index>(want))) <
                           1e-10) {
      ++want;
    }

    bool all_converged = true;
    for (std::size_t i = 0; i < want && all_converged; ++i) {
      const Eigen::VectorXcd y = triangular_eigenvector(t, static_cast<Index>(i));
      const cplx theta = t(static_cast<Index>(i), static_cast<Index>(i));
      const double estimate = beta_last * std::abs((q.row(mi - 1) * y)(0));
      all_converged = estimate <= 0.5 * options.tol * std::max(1.0, std::abs(theta));
    }

    result.iterations = restart + 1;
    if (all_converged || restart + 1 >= options.max_restarts) {
      result.converged = all_converged;
      break;
    }

    // Keep the leading p Schur vectors and the residual direction.
    const std::size_t p = std::min(std::max(want + (m - want) / 2, want), m - 1);
    const Index pi = static_cast<Index>(p);
    std::vector<cplx> fresh(n * p, cplx{});
    for (std::size_t c = 0; c < p; ++c) {
      std::span<cplx> dst(fresh.data() + c * n, n);
      for (std::size_t j = 0; j < m; ++j) {
        kernels::axpy(q(static_cast<Index>(j), static_cast<Index>(c)), v.col(j), dst);
      }
    }
    std::copy(v.col(m).begin(), v.col(m).end(), v.col(p).begin());
    for (std::size_t c = 0; c < p; ++c) std::copy(fresh.begin() + c * n, fresh.begin() + (c + 1) * n, v.col(c).begin());

    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(mi + 1, mi);
    next.topLeftCorner(pi, pi) = t.topLeftCorner(pi, pi);
    next.block(pi, 0, 1, pi) = b.head(pi);
    h = next;
    start = p;
  }

  result.boundary_tie = want > k;
  bool true_converged = result.converged;
  for (std::size_t i = 0; i < want; ++i) {
    const Eigen::VectorXcd y = q * triangular_eigenvector(t, static_cast<Index>(i));
    Eigenpair pair;
    pair.value = t(static_cast<Index>(i), static_cast<Index>(i));
    pair.vector.assign(n, cplx{});
    for (std::size_t j = 0; j < m; ++j) kernels::axpy(y(static_cast<Index>(j)), v.col(j), pair.vector);
    const double nrm = std::sqrt(kernels::norm_sq(pair.vector));
    for (cplx& e : pair.vector) e /= nrm;
    normalize_phase(pair.vector);
    pair.residual = residual_norm(op, pair.vector, pair.value);
    if (pair.residual > options.tol * std::max(1.0, std::abs(pair.value))) true_converged = false;
    result.pairs.push_back(std::move(pair));
  }
  result.converged = true_converged;
  return result;
}

SpectrumResult top_modulus_eigenpairs(const TransitionOperator& op, std::size_t k, double tol, int max_restarts,
                                      std::uint64_t seed) {
  ArnoldiOptions options;
  options.k = k;
  options.tol = tol;
  options.max_restarts = max_restarts;
  options.seed = seed;
  return top_modulus_eigenpairs(op, options);
}

}  // namespace blockspec
