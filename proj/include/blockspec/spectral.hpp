#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "blockspec/common.hpp"
#include "blockspec/graph.hpp"
#include "blockspec/transition.hpp"

namespace blockspec {

inline constexpr std::size_t kDefaultDenseCap = 2000;

struct Eigenpair {
  cplx value;
  std::vector<cplx> vector;  // unit 2-norm
  double residual = 0.0;     // ||A v - lambda v||_2
};

struct SpectrumResult {
  std::vector<Eigenpair> pairs;  // descending |lambda|
  int iterations = 0;
  bool converged = false;
  /// Set when |lambda_k| and |lambda_{k+1}| were within 1e-10 and the extra
  /// pair(s) were returned.
  bool boundary_tie = false;
};

struct ArnoldiOptions {
  std::size_t k = 1;
  double tol = 1e-8;
  int max_restarts = 2000;
  std::uint64_t seed = 0;
  /// Krylov subspace size; 0 selects max(2k + 10, 30), capped at n.
  std::size_t subspace = 0;
};

/// Largest-modulus eigenpairs of a transition operator by Krylov-Schur
/// restarted Arnoldi in complex arithmetic.
SpectrumResult top_modulus_eigenpairs(const TransitionOperator& op, const ArnoldiOptions& options);

SpectrumResult top_modulus_eigenpairs(const TransitionOperator& op, std::size_t k, double tol,
                                      int max_restarts, std::uint64_t seed);

/// Full eigendecomposition of a dense copy; the test oracle.
struct DenseEigensystem {
  Eigen::VectorXcd values;        // descending modulus
  Eigen::MatrixXcd right;         // columns: unit right eigenvectors
  Eigen::MatrixXcd left;          // columns: unit left eigenvectors (A^T y = lambda y)
};

DenseEigensystem dense_eigensystem(const TransitionOperator& op,
                                   std::size_t dense_cap = kDefaultDenseCap);
DenseEigensystem dense_eigensystem(const Eigen::MatrixXd& a, std::size_t dense_cap = kDefaultDenseCap);

SpectrumResult dense_spectrum(const TransitionOperator& op, std::size_t dense_cap = kDefaultDenseCap);

/// Stationary distribution: f >= 0, ||f||_1 = 1, ||M^T f - f||_2 <= tol.
std::vector<double> perron_vector(const TransitionOperator& op, double tol = 1e-12,
                                  int max_iter = 1000000);

struct PerturbationReport {
  double sigma = 0.0;
  double rho = 0.0;
  double perron_norm2 = 0.0;
  double bound_first_order = 0.0;
};

/// Quantities of the first-order cycle-eigenvalue perturbation bound for a
/// strongly connected graph `g` and its edge-wise heavier supergraph `g_hat`.
PerturbationReport perturbation_diagnostics(const DirectedGraph& g, const DirectedGraph& g_hat);

/// min over other eigenvalues mu of |mu - lambda_l|.
double eigengap_condition(const SpectrumResult& spectrum, std::size_t l);

/// ||(lambda I - M)^#||_2 for a simple eigenvalue lambda (dense).
double drazin_norm(const TransitionOperator& op, cplx lambda, std::size_t dense_cap = kDefaultDenseCap);

}  // namespace blockspec
