#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blockspec/clusterkit.hpp"
#include "blockspec/common.hpp"
#include "blockspec/graph.hpp"
#include "blockspec/spectral.hpp"

namespace blockspec {

struct Provenance {
  std::string algorithm;
  std::uint64_t seed = 0;
  EigenFilter filter = EigenFilter::PositiveImaginary;
  int solver_iterations = 0;
  bool solver_converged = true;
  bool boundary_tie = false;
  bool filter_fell_back = false;
  bool strongly_connected = true;
  int kmeans_restarts = 0;
  double kmeans_inertia = 0.0;
  std::vector<cplx> eigenvalues;
  /// G^B edges removed to break cycles before ranking (original labels).
  std::vector<std::pair<Label, Label>> deleted_block_edges;
  std::vector<std::string> warnings;
};

struct BlockAssignment {
  Labels labels;
  std::size_t k = 0;
  bool ranked = false;
  Provenance provenance;
};

struct SpectralOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 10;
  /// Unset: positive-imaginary for bcs, all k for bas.
  std::optional<EigenFilter> filter;
  int max_restarts = 2000;
  int kmeans_max_iter = 300;
};

/// Block-cyclic spectral clustering (transition matrix P).
BlockAssignment bcs(const DirectedGraph& g, std::size_t k, const SpectralOptions& options = {});
/// Block-acyclic spectral clustering (transition matrix P_a).
BlockAssignment bas(const DirectedGraph& g, std::size_t k, const SpectralOptions& options = {});

/// Relabels blocks by a topological order of the block graph G^B.
BlockAssignment rank_blocks(const DirectedGraph& g, const BlockAssignment& a);

/// Fraction of edges going from a lower to a strictly higher label. 1 on an
/// empty edge set.
double acyclicity_score(const DirectedGraph& g, std::span<const Label> labels);
double weighted_acyclicity_score(const DirectedGraph& g, std::span<const Label> labels);

/// One pass in seeded random order, moving each node to an adjacent rank when
/// that strictly increases the acyclicity score.
BlockAssignment refine_assignment(const DirectedGraph& g, const BlockAssignment& a, std::uint64_t seed);

enum class TrophicMode {
  DietFraction,  // T_i = 1 + sum_j T_j W_ji / d_i^in, sources pinned at 1
  PaperMatrix,   // T = (I - P^T)^+ 1 with out-normalized P
};

struct TrophicResult {
  std::vector<double> levels;
  TrophicMode mode = TrophicMode::DietFraction;
  bool used_fallback = false;
};

TrophicResult trophic_levels(const DirectedGraph& g, TrophicMode mode,
                             std::size_t dense_cap = kDefaultDenseCap);

/// Fraction of unordered pairs ranked in opposite order by labels and scores.
double inversion_error(std::span<const Label> labels, std::span<const double> scores);

}  // namespace blockspec
