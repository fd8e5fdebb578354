#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "blockspec/error.hpp"
#include "blockspec/spectral.hpp"

namespace blockspec {
namespace {

using Index = Eigen::Index;

// Descending modulus; ties broken by imaginary then real part so the order
// does not depend on the LAPACK-style output order.
std::vector<Index> modulus_order(const Eigen::VectorXcd& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(values(a));
    const double mb = std::abs(values(b));
    if (std::abs(ma - mb) > 1e-12 * std::max(1.0, std::max(ma, mb))) return ma > mb;
    if (values(a).imag() != values(b).imag()) return values(a).imag() > values(b).imag();
    return values(a).real() > values(b).real();
  });
  return order;
}

}  // namespace

DenseEigensystem dense_eigensystem(const Eigen::MatrixXd& a, std::size_t dense_cap) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (n > dense_cap) {
    fail(ErrorKind::InvalidArgument,
         "dense eigensolver limited to " + std::to_string(dense_cap) + " nodes, got " + std::to_string(n));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> right(a, true);
  Eigen::EigenSolver<Eigen::MatrixXd> left(a.transpose(), true);
  if (right.info() != Eigen::Success || left.info() != Eigen::Success) {
    fail(ErrorKind::Numerical, "dense eigendecomposition did not converge");
  }
  const Eigen::VectorXcd values = right.eigenvalues();
  const Eigen::MatrixXcd rvec = right.eigenvectors();
  const Eigen::VectorXcd lvalues = left.eigenvalues();
  const Eigen::MatrixXcd lvec = left.eigenvectors();

  const auto order = modulus_order(values);
  DenseEigensystem out;
  out.values.resize(values.size());
  out.right.resize(a.rows(), a.cols());
  out.left.resize(a.rows(), a.cols());
  std::vector<bool> used(static_cast<std::size_t>(values.size()), false);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Index i = order[pos];
    const Index p = static_cast<Index>(pos);
    out.values(p) = values(i);
    out.right.col(p) = rvec.col(i).normalized();
    // Pair each right eigenvector with the closest unused left eigenvalue.
    Index best = -1;
    for (Index j = 0; j < lvalues.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      if (best < 0 || std::abs(lvalues(j) - values(i)) < std::abs(lvalues(best) - values(i))) best = j;
    }
    used[static_cast<std::size_t>(best)] = true;
    out.left.col(p) = lvec.col(best).normalized();
  }
  return out;
}

DenseEigensystem dense_eigensystem(const TransitionOperator& op, std::size_t dense_cap) {
  if (op.size() > dense_cap) {
    fail(ErrorKind::InvalidArgument,
         "dense eigensolver limited to " + std::to_string(dense_cap) + " nodes, got " + std::to_string(op.size()));
  }
  return dense_eigensystem(op.to_dense(), dense_cap);
}

SpectrumResult dense_spectrum(const TransitionOperator& op, std::size_t dense_cap) {
  const DenseEigensystem sys = dense_eigensystem(op, dense_cap);
  const Eigen::MatrixXd a = op.to_dense();
  SpectrumResult result;
  result.converged = true;
  for (Index i = 0; i < sys.values.size(); ++i) {
    Eigenpair pair;
    pair.value = sys.values(i);
    const Eigen::VectorXcd v = sys.right.col(i);
    pair.vector.assign(v.data(), v.data() + v.size());
    pair.residual = (a.cast<cplx>() * v - pair.value * v).norm();
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

}  // namespace blockspec
