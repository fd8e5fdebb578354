#include "blockspec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "blockspec/error.hpp"

namespace blockspec {

ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> estimate, std::size_t k) {
  if (truth.size() != estimate.size()) {
    fail(ErrorKind::InvalidArgument, "label vectors differ in length (" + std::to_string(truth.size()) + " vs " +
                                         std::to_string(estimate.size()) + ")");
  }
  ConfusionMatrix m;
  m.k = k;
  m.n = truth.size();
  m.counts.assign(k * k, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= k || estimate[i] >= k) fail(ErrorKind::InvalidArgument, "label out of range 0..k-1");
    ++m.counts[truth[i] * k + estimate[i]];
  }
  return m;
}

// Shortest augmenting path with potentials; rows and columns are 1-based inside.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t k) {
  if (cost.size() != k * k) fail(ErrorKind::InvalidArgument, "cost matrix must be k x k");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(k + 1, inf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of_row(k, 0);
  for (std::size_t j = 1; j <= k; ++j) {
    if (p[j] != 0) col_of_row[p[j] - 1] = j - 1;
  }
  return col_of_row;
}

double block_membership_error(std::span<const Label> truth, std::span<const Label> estimate, std::size_t k) {
  const ConfusionMatrix m = confusion_matrix(truth, estimate, k);
  if (m.n == 0) return 0.0;
  std::vector<double> cost(k * k);
  for (std::size_t i = 0; i < k * k; ++i) cost[i] = -static_cast<double>(m.counts[i]);
  const auto match = solve_assignment(cost, k);
  std::size_t agree = 0;
  for (std::size_t t = 0; t < k; ++t) agree += m.at(t, match[t]);
  return static_cast<double>(m.n - agree) / static_cast<double>(m.n);
}

double nmi(std::span<const Label> truth, std::span<const Label> estimate) {
  if (truth.size() != estimate.size()) fail(ErrorKind::InvalidArgument, "label vectors differ in length");
  if (truth.empty()) fail(ErrorKind::InvalidArgument, "nmi of empty partitions");
  std::map<Label, std::size_t> a, b;
  std::map<std::pair<Label, Label>, std::size_t> joint;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++a[truth[i]];
    ++b[estimate[i]];
    ++joint[{truth[i], estimate[i]}];
  }
  const bool a_single = a.size() == 1, b_single = b.size() == 1;
  if (a_single && b_single) return 1.0;
  if (a_single || b_single) return 0.0;

  const double n = static_cast<double>(truth.size());
  auto entropy = [n](const std::map<Label, std::size_t>& h) {
    double s = 0.0;
    for (const auto& [label, c] : h) {
      const double q = static_cast<double>(c) / n;
      s -= q * std::log(q);
    }
    return s;
  };
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double q = static_cast<double>(c) / n;
    mi += q * std::log(q * n * n / (static_cast<double>(a[key.first]) * static_cast<double>(b[key.second])));
  }
  const double value = 2.0 * mi / (entropy(a) + entropy(b));
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace blockspec
