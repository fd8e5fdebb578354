#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "blockspec/blockalgo.hpp"
#include "blockspec/clusterkit.hpp"
#include "blockspec/graph.hpp"

namespace blockspec {

struct SymmetricGraph {
  std::size_t n = 0;
  Eigen::MatrixXd weights;
};

/// (1 - alpha) W^T W + alpha W W^T
SymmetricGraph bibliometric_symmetrization(const DirectedGraph& g, double alpha);

/// Normalized Laplacian with the 1 - W_uu / d_u diagonal; isolated rows are zero.
Eigen::MatrixXd normalized_laplacian(const SymmetricGraph& s);

struct BaselineOptions {
  std::uint64_t seed = 0;
  int restarts = 10;
  int kmeans_max_iter = 300;
  std::size_t dense_cap = kDefaultDenseCap;
};

/// Bibliometric symmetrization followed by undirected spectral clustering.
BlockAssignment bib_cluster(const DirectedGraph& g, std::size_t k, double alpha,
                            const BaselineOptions& options = {});

struct SvdEmbedding {
  PointSet points;                      // n rows of [U sqrt(S), V sqrt(S)]
  std::vector<double> singular_values;  // the triplets kept, descending
};

/// Keeps at most d triplets, fewer when W is numerically rank deficient.
SvdEmbedding svd_embedding(const DirectedGraph& g, std::size_t d, std::size_t dense_cap = kDefaultDenseCap);

/// Adjacency spectral embedding: top-d singular triplets, rows [U sqrt(S), V sqrt(S)].
BlockAssignment svd_cluster(const DirectedGraph& g, std::size_t d, std::size_t k,
                            const BaselineOptions& options = {});

}  // namespace blockspec
