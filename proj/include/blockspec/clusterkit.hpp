#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blockspec/common.hpp"
#include "blockspec/spectral.hpp"

namespace blockspec {

enum class EigenFilter {
  AllK,              // every one of the k largest-modulus eigenvectors
  PositiveImaginary, // only Im(lambda) > 1e-9 among them
};

/// n x c complex matrix, row-major; column j is the eigenvector of
/// source_eigenvalues[j].
struct EmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> values;
  std::vector<cplx> source_eigenvalues;
  bool filter_fell_back = false;

  std::span<const cplx> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  cplx& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  cplx at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

EmbeddingMatrix build_embedding(const SpectrumResult& spectrum, std::size_t k, EigenFilter filter);

/// Real point cloud, row-major.
struct PointSet {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<const double> point(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

/// C^c rows as R^{2c}: real parts then imaginary parts.
PointSet to_real_points(const EmbeddingMatrix& embedding);

struct KmeansOptions {
  std::size_t k = 2;
  int restarts = 10;
  int max_iter = 300;
  std::uint64_t seed = 0;
};

struct KmeansResult {
  Labels assignment;
  std::vector<double> centroids;  // k x dim, row-major (real view)
  double inertia = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  /// Inertia after every Lloyd iteration of the winning restart.
  std::vector<double> inertia_trace;
};

/// Lloyd iterations with k-means++ seeding; best inertia over restarts.
KmeansResult kmeans(const PointSet& points, const KmeansOptions& options);
KmeansResult kmeans(const EmbeddingMatrix& embedding, const KmeansOptions& options);

/// sum_i ||x_i - c_{label_i}||^2 recomputed from scratch.
double inertia_of(const PointSet& points, std::span<const Label> labels,
                  std::span<const double> centroids);

}  // namespace blockspec
