#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blockspec/common.hpp"
#include "blockspec/graph.hpp"

namespace blockspec {

enum class TransitionKind {
  RowStochastic,   // P: dangling rows are zero
  UniformDangling, // P_a: dangling rows are 1/n
};

/// Matrix-free random-walk transition operator of a directed graph.
///
/// Holds the normalized weights in both row- and column-compressed form so
/// that M x and M^T x are gathers; dangling rows are handled implicitly.
class TransitionOperator {
 public:
  TransitionOperator(const DirectedGraph& g, TransitionKind kind);

  TransitionKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return n_; }

  /// y <- M x
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  /// y <- M^T x
  void apply_transpose(std::span<const cplx> x, std::span<cplx> y) const;

  double entry(NodeId i, NodeId j) const;
  double row_sum(NodeId i) const;

  /// True when the Markov chain is irreducible (dangling rows of P_a count as
  /// edges to every node).
  bool irreducible() const;

  std::span<const NodeId> dangling() const noexcept { return dangling_; }

  /// Dense copy, for the dense oracles only.
  Eigen::MatrixXd to_dense() const;

 private:
  TransitionKind kind_;
  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<NodeId> row_cols_;
  std::vector<double> row_vals_;
  std::vector<std::size_t> col_offsets_;
  std::vector<NodeId> col_rows_;
  std::vector<double> col_vals_;
  std::vector<NodeId> dangling_;
};

TransitionOperator transition_P(const DirectedGraph& g);
TransitionOperator transition_Pa(const DirectedGraph& g);

}  // namespace blockspec
