#include "blockspec/clusterkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blockspec/error.hpp"
#include "blockspec/kernels.hpp"

namespace blockspec {

EmbeddingMatrix build_embedding(const SpectrumResult& spectrum, std::size_t k, EigenFilter filter) {
  if (k == 0 || spectrum.pairs.size() < k) {
    fail(ErrorKind::InvalidArgument, "embedding needs " + std::to_string(k) + " eigenpairs, spectrum has " +
                                         std::to_string(spectrum.pairs.size()));
  }
  std::vector<std::size_t> chosen;
  if (filter == EigenFilter::PositiveImaginary) {
    // Eigenvalue 1 carries a constant vector and conjugates duplicate
    // information, so one column per conjugate pair suffices. Tied pairs past
    // position k are candidates too, capped at the pure-cycle column count.
    const std::size_t cap = (k - 1) / 2;
    for (std::size_t i = 0; i < spectrum.pairs.size() && chosen.size() < cap; ++i) {
      if (spectrum.pairs[i].value.imag() > 1e-9) chosen.push_back(i);
    }
  }
  EmbeddingMatrix out;
  if (chosen.empty()) {
    out.filter_fell_back = filter == EigenFilter::PositiveImaginary;
    for (std::size_t i = 0; i < k; ++i) chosen.push_back(i);
  }

  out.rows = spectrum.pairs.front().vector.size();
  out.cols = chosen.size();
  out.values.resize(out.rows * out.cols);
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    const Eigenpair& pair = spectrum.pairs[chosen[c]];
    out.source_eigenvalues.push_back(pair.value);
    double nrm = 0.0;
    for (const cplx& x : pair.vector) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < out.rows; ++r) out.at(r, c) = pair.vector[r] / nrm;
  }
  return out;
}

PointSet to_real_points(const EmbeddingMatrix& embedding) {
  PointSet pts;
  pts.count = embedding.rows;
  pts.dim = 2 * embedding.cols;
  pts.values.resize(pts.count * pts.dim);
  for (std::size_t i = 0; i < embedding.rows; ++i) {
    for (std::size_t j = 0; j < embedding.cols; ++j) {
      pts.values[i * pts.dim + j] = embedding.at(i, j).real();
      pts.values[i * pts.dim + embedding.cols + j] = embedding.at(i, j).imag();
    }
  }
  return pts;
}

double inertia_of(const PointSet& points, std::span<const Label> labels, std::span<const double> centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.count; ++i) {
    total += kernels::squared_distance(points.point(i), centroids.subspan(labels[i] * points.dim, points.dim));
  }
  return total;
}

namespace {

struct Lloyd {
  const PointSet& pts;
  std::size_t k;

  std::span<const double> centroid(const std::vector<double>& c, std::size_t j) const {
    return {c.data() + j * pts.dim, pts.dim};
  }

  std::vector<double> seed_plus_plus(Rng& rng) const {
    std::vector<double> c(k * pts.dim);
    const std::size_t first = uniform_index(rng, pts.count);
    std::copy_n(pts.point(first).begin(), pts.dim, c.begin());
    std::vector<double> d2(pts.count);
    for (std::size_t i = 0; i < pts.count; ++i) d2[i] = kernels::squared_distance(pts.point(i), centroid(c, 0));
    for (std::size_t j = 1; j < k; ++j) {
      double total = 0.0;
      for (double d : d2) total += d;
      std::size_t pick = 0;
      if (total > 0.0) {
        const double target = unit_uniform(rng) * total;
        double acc = 0.0;
        pick = pts.count;
        for (std::size_t i = 0; i < pts.count; ++i) {
          if (d2[i] <= 0.0) continue;
          acc += d2[i];
          pick = i;
          if (acc > target) break;
        }
      } else {
        pick = uniform_index(rng, pts.count);
      }
      std::copy_n(pts.point(pick).begin(), pts.dim, c.begin() + static_cast<std::ptrdiff_t>(j * pts.dim));
      for (std::size_t i = 0; i < pts.count; ++i) {
        d2[i] = std::min(d2[i], kernels::squared_distance(pts.point(i), centroid(c, j)));
      }
    }
    return c;
  }

  // Returns the number of labels that changed.
  std::size_t assign(const std::vector<double>& c, Labels& labels) const {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < pts.count; ++i) {
      Label best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double d = kernels::squared_distance(pts.point(i), centroid(c, j));
        if (d < best_d) {
          best_d = d;
          best = static_cast<Label>(j);
        }
      }
      if (labels[i] != best) ++changed;
      labels[i] = best;
    }
    return changed;
  }

  std::vector<std::size_t> update(std::vector<double>& c, const Labels& labels) const {
    std::vector<std::size_t> sizes(k, 0);
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < pts.count; ++i) {
      ++sizes[labels[i]];
      const auto p = pts.point(i);
      for (std::size_t d = 0; d < pts.dim; ++d) c[labels[i] * pts.dim + d] += p[d];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] == 0) continue;
      for (std::size_t d = 0; d < pts.dim; ++d) c[j * pts.dim + d] /= static_cast<double>(sizes[j]);
    }
    return sizes;
  }

  // Each empty cluster takes the point farthest from its own centroid.
  void repair_empty(std::vector<double>& c, Labels& labels) const {
    auto sizes = update(c, labels);
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] != 0) continue;
      std::size_t far = pts.count;
      double far_d = -1.0;
      for (std::size_t i = 0; i < pts.count; ++i) {
        if (sizes[labels[i]] < 2) continue;
        const double d = kernels::squared_distance(pts.point(i), centroid(c, labels[i]));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == pts.count || far_d <= 0.0) continue;  // fewer distinct points than k
      labels[far] = static_cast<Label>(j);
      sizes = update(c, labels);
    }
  }

  KmeansResult run(int max_iter, std::uint64_t seed) const {
    Rng rng(seed);
    KmeansResult r;
    std::vector<double> c = seed_plus_plus(rng);
    r.assignment.assign(pts.count, 0);
    for (int it = 0; it < max_iter; ++it) {
      const std::size_t changed = assign(c, r.assignment);
      repair_empty(c, r.assignment);
      r.iterations = it + 1;
      r.inertia_trace.push_back(inertia_of(pts, r.assignment, c));
      if (changed == 0 && it > 0) break;
    }
    r.centroids = std::move(c);
    r.inertia = r.inertia_trace.empty() ? 0.0 : r.inertia_trace.back();
    return r;
  }
};

}  // namespace

KmeansResult kmeans(const PointSet& points, const KmeansOptions& options) {
  if (options.k == 0 || options.k > points.count) {
    fail(ErrorKind::InvalidArgument, "k-means needs 1 <= k <= n (k = " + std::to_string(options.k) +
                                         ", n = " + std::to_string(points.count) + ")");
  }
  if (options.restarts < 1) fail(ErrorKind::InvalidArgument, "k-means needs at least one restart");
  const Lloyd lloyd{points, options.k};
  KmeansResult best;
  for (int r = 0; r < options.restarts; ++r) {
    KmeansResult candidate = lloyd.run(std::max(options.max_iter, 1), derive_seed(options.seed, static_cast<std::uint64_t>(r)));
    if (r == 0 || candidate.inertia < best.inertia) best = std::move(candidate);
  }
  best.restarts_used = options.restarts;
  return best;
}

KmeansResult kmeans(const EmbeddingMatrix& embedding, const KmeansOptions& options) {
  return kmeans(to_real_points(embedding), options);
}

}  // namespace blockspec
