#include "blockspec/transition.hpp"

#include <algorithm>

#include "blockspec/kernels.hpp"

namespace blockspec {

TransitionOperator::TransitionOperator(const DirectedGraph& g, TransitionKind kind)
    : kind_(kind), n_(g.node_count()) {
  const auto offsets = g.out_offsets();
  row_offsets_.assign(offsets.begin(), offsets.end());
  const auto targets = g.out_targets();
  row_cols_.assign(targets.begin(), targets.end());
  row_vals_.resize(row_cols_.size());
  for (NodeId i = 0; i < n_; ++i) {
    const double d = g.out_degree(i);
    if (d > 0.0) {
      for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
        row_vals_[p] = g.out_weight_values()[p] / d;
      }
    } else {
      dangling_.push_back(i);
    }
  }

  const auto in_offsets = g.in_offsets();
  col_offsets_.assign(in_offsets.begin(), in_offsets.end());
  const auto sources = g.in_sources();
  col_rows_.assign(sources.begin(), sources.end());
  col_vals_.resize(col_rows_.size());
  for (std::size_t p = 0; p < col_rows_.size(); ++p) {
    col_vals_[p] = g.in_weight_values()[p] / g.out_degree(col_rows_[p]);
  }
}

void TransitionOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  kernels::active().spmv(n_, row_offsets_.data(), row_cols_.data(), row_vals_.data(), x.data(), y.data());
  if (kind_ == TransitionKind::UniformDangling && !dangling_.empty()) {
    cplx mean = 0.0;
    for (const cplx& v : x) mean += v;
    mean /= static_cast<double>(n_);
    for (NodeId i : dangling_) y[i] = mean;
  }
}

void TransitionOperator::apply_transpose(std::span<const cplx> x, std::span<cplx> y) const {
  kernels::active().spmv(n_, col_offsets_.data(), col_rows_.data(), col_vals_.data(), x.data(), y.data());
  if (kind_ == TransitionKind::UniformDangling && !dangling_.empty()) {
    cplx mass = 0.0;
    for (NodeId i : dangling_) mass += x[i];
    mass /= static_cast<double>(n_);
    for (cplx& v : y) v += mass;
  }
}

double TransitionOperator::entry(NodeId i, NodeId j) const {
  if (row_offsets_[i] == row_offsets_[i + 1]) {
    return kind_ == TransitionKind::UniformDangling ? 1.0 / static_cast<double>(n_) : 0.0;
  }
  const auto first = row_cols_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = row_cols_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return row_vals_[static_cast<std::size_t>(it - row_cols_.begin())];
}

double TransitionOperator::row_sum(NodeId i) const {
  if (row_offsets_[i] == row_offsets_[i + 1]) {
    return kind_ == TransitionKind::UniformDangling ? 1.0 : 0.0;
  }
  double s = 0.0;
  for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += row_vals_[p];
  return s;
}

bool TransitionOperator::irreducible() const {
  if (n_ == 0) return false;
  // Forward reachability from node 0 and backward reachability to node 0 over
  // the operator's nonzero pattern; a dangling row of P_a reaches every node.
  const bool teleport = kind_ == TransitionKind::UniformDangling && !dangling_.empty();
  auto sweep = [&](bool reverse) {
    std::vector<bool> seen(n_, false);
    std::vector<NodeId> stack{0};
    seen[0] = true;
    bool teleported = false;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      const auto& offs = reverse ? col_offsets_ : row_offsets_;
      const auto& idx = reverse ? col_rows_ : row_cols_;
      for (std::size_t p = offs[u]; p < offs[u + 1]; ++p) {
        if (!seen[idx[p]]) {
          seen[idx[p]] = true;
          stack.push_back(idx[p]);
        }
      }
      if (!teleport) continue;
      const bool u_dangling = std::binary_search(dangling_.begin(), dangling_.end(), u);
      if (!reverse && u_dangling && !teleported) {
        teleported = true;
        for (NodeId v = 0; v < n_; ++v) {
          if (!seen[v]) {
            seen[v] = true;
            stack.push_back(v);
          }
        }
      }
      if (reverse && !teleported) {
        // every node is a successor of each dangling node
        teleported = true;
        for (NodeId v : dangling_) {
          if (!seen[v]) {
            seen[v] = true;
            stack.push_back(v);
          }
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return sweep(false) && sweep(true);
}

Eigen::MatrixXd TransitionOperator::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  for (NodeId i = 0; i < n_; ++i) {
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) m(i, row_cols_[p]) = row_vals_[p];
  }
  if (kind_ == TransitionKind::UniformDangling) {
    for (NodeId i : dangling_) m.row(i).setConstant(1.0 / static_cast<double>(n_));
  }
  return m;
}

TransitionOperator transition_P(const DirectedGraph& g) {
  return TransitionOperator(g, TransitionKind::RowStochastic);
}

TransitionOperator transition_Pa(const DirectedGraph& g) {
  return TransitionOperator(g, TransitionKind::UniformDangling);
}

}  // namespace blockspec
