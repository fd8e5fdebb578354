#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "blockspec/common.hpp"
#include "blockspec/graph.hpp"

namespace blockspec {

/// SBM(k, rho, P): block probabilities rho and k x k edge probabilities P.
struct SbmParams {
  std::size_t k = 0;
  std::vector<double> rho;
  std::vector<double> prob;  // row-major k x k

  double at(std::size_t s, std::size_t t) const { return prob[s * k + t]; }
  double& at(std::size_t s, std::size_t t) { return prob[s * k + t]; }
};

/// Throws InvalidArgument unless sum(rho) = 1 (1e-12) and P is in [0, 1].
void validate(const SbmParams& params);

struct LabeledGraph {
  DirectedGraph graph;
  Labels tau;
  std::size_t k = 0;
};

LabeledGraph sample_sbm(const SbmParams& params, std::size_t n, std::uint64_t seed);

/// p on the cyclic successor pairs (s, s+1 mod k), 0 elsewhere.
SbmParams cycle_params(std::size_t k, double p, std::vector<double> rho);
/// p strictly above the diagonal.
SbmParams acyclic_params(std::size_t k, double p, std::vector<double> rho);

inline constexpr std::array<double, 8> kBenchmarkRhoRaw{0.18, 0.2, 0.05, 0.2, 0.14, 0.04, 0.07, 0.13};
/// The benchmark block distribution, renormalized (the printed values sum to 1.01).
std::vector<double> benchmark_rho();
std::vector<double> uniform_rho(std::size_t k);

/// epsilon * Q with Q i.i.d. uniform on [0, 1].
SbmParams perturbation_params(std::size_t k, double epsilon, std::uint64_t seed,
                              std::vector<double> rho);

/// Union with a graph drawn from `noise` (its own labels are discarded);
/// weights are capped at 1.
LabeledGraph union_perturb(const LabeledGraph& base, const SbmParams& noise, std::uint64_t seed);

/// Two independent SBM draws joined by cross edges with probability alpha * P.
LabeledGraph combine_twin_sbm(const SbmParams& params, std::size_t n_each, double alpha,
                              std::uint64_t seed);

/// Block-cycle with edge probability p_cycle plus `extra_edges` new edges
/// allowed by the nested pattern (tau(u) < tau(v) or tau(u) = last block).
LabeledGraph nested_block_cycle(std::size_t k, std::size_t n, double p_cycle,
                                std::size_t extra_edges, std::uint64_t seed);

/// Appends `extra_edges` new edges uniformly among all absent non-loop pairs.
LabeledGraph random_edge_perturb(const LabeledGraph& base, std::size_t extra_edges, std::uint64_t seed);

/// Block-cycle with random block sizes and uniform(0.5, 2) weights where every
/// node has an out-edge to the next block and an in-edge from the previous one.
/// Redrawn until strongly connected.
LabeledGraph weighted_block_cycle(std::size_t k, std::size_t n, double density, std::uint64_t seed);

}  // namespace blockspec
