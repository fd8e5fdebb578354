#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "blockspec/common.hpp"

namespace blockspec {

struct ConfusionMatrix {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<std::size_t> counts;  // k x k, row = truth, col = estimate

  std::size_t at(std::size_t t, std::size_t e) const { return counts[t * k + e]; }
};

ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> estimate,
                                 std::size_t k);

/// Minimum-cost perfect matching on a square cost matrix (Hungarian, O(k^3)).
/// Returns column assigned to each row.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t k);

/// Minimum fraction of mismatched nodes over all relabelings of `estimate`.
double block_membership_error(std::span<const Label> truth, std::span<const Label> estimate,
                              std::size_t k);

/// 2 I / (H_truth + H_estimate), natural log.
double nmi(std::span<const Label> truth, std::span<const Label> estimate);

}  // namespace blockspec
