#include <doctest.h>

#include <cmath>
#include <numeric>

#include "blockspec/error.hpp"
#include "blockspec/synth.hpp"
#include "support.hpp"

using namespace blockspec;

namespace {

bool same_graph(const DirectedGraph& a, const DirectedGraph& b) {
  const auto ea = a.edges(), eb = b.edges();
  if (a.node_count() != b.node_count() || ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].src != eb[i].src || ea[i].dst != eb[i].dst || ea[i].weight != eb[i].weight) return false;
  }
  return true;
}

bool has_self_loop(const DirectedGraph& g) {
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("sample_sbm extremes") {
  SbmParams zero{2, {0.5, 0.5}, {0, 0, 0, 0}};
  CHECK(sample_sbm(zero, 10, 1).graph.edge_count() == 0);
  SbmParams full{2, {0.5, 0.5}, {1, 1, 1, 1}};
  const auto g = sample_sbm(full, 4, 1);
  CHECK(g.graph.edge_count() == 12);
  CHECK_FALSE(has_self_loop(g.graph));
  CHECK_THROWS_AS(sample_sbm(full, 1, 1), Error);
  SbmParams bad{2, {0.6, 0.6}, {0, 0, 0, 0}};
  CHECK_THROWS_AS(validate(bad), Error);
  SbmParams badp{2, {0.5, 0.5}, {0, 1.5, 0, 0}};
  CHECK_THROWS_AS(validate(badp), Error);
}

TEST_CASE("empirical edge frequency between blocks") {
  SbmParams p{2, {0.5, 0.5}, {0, 0.3, 0, 0}};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto lg = sample_sbm(p, 2000, seed);
    std::size_t n0 = 0;
    for (Label t : lg.tau) n0 += t == 0;
    const double pairs = static_cast<double>(n0) * static_cast<double>(2000 - n0);
    std::size_t hits = 0;
    for (const Edge& e : lg.graph.edges()) {
      CHECK(lg.tau[e.src] == 0);
      CHECK(lg.tau[e.dst] == 1);
      ++hits;
    }
    CHECK(std::abs(static_cast<double>(hits) / pairs - 0.3) < 0.02);
  }
}

TEST_CASE("block-pair edge counts fall inside a 4-sigma binomial band") {
  const auto params = cycle_params(4, 0.3, uniform_rho(4));
  auto noisy = params;
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t t = 0; t < 4; ++t) noisy.at(s, t) += 0.05 * static_cast<double>((s + 2 * t) % 3);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto lg = sample_sbm(noisy, 300, seed);
    std::vector<double> size(4, 0.0), count(16, 0.0);
    for (Label t : lg.tau) size[t] += 1;
    for (const Edge& e : lg.graph.edges()) count[lg.tau[e.src] * 4 + lg.tau[e.dst]] += 1;
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t t = 0; t < 4; ++t) {
        const double m = s == t ? size[s] * (size[s] - 1) : size[s] * size[t];
        const double p = noisy.at(s, t);
        const double mean = m * p, sd = std::sqrt(m * p * (1 - p));
        CHECK(std::abs(count[s * 4 + t] - mean) <= 4 * sd + 1e-9);
      }
    }
  }
}

TEST_CASE("cycle and acyclic parameterizations") {
  const auto c8 = cycle_params(8, 0.7, benchmark_rho());
  std::size_t nz = 0;
  for (double x : c8.prob) {
    if (x != 0.0) {
      ++nz;
      CHECK(x == 0.7);
    }
  }
  CHECK(nz == 8);
  for (std::size_t s = 0; s < 8; ++s) CHECK(c8.at(s, (s + 1) % 8) == 0.7);

  const auto c2 = cycle_params(2, 1.0, uniform_rho(2));
  CHECK(c2.prob == std::vector<double>{0, 1, 1, 0});
  const auto c3 = cycle_params(3, 0.5, uniform_rho(3));
  CHECK(c3.at(0, 1) == 0.5);
  CHECK(c3.at(1, 2) == 0.5);
  CHECK(c3.at(2, 0) == 0.5);

  const auto a8 = acyclic_params(8, 0.5, benchmark_rho());
  nz = 0;
  for (std::size_t s = 0; s < 8; ++s) {
    for (std::size_t t = 0; t < 8; ++t) {
      if (a8.at(s, t) != 0.0) {
        ++nz;
        CHECK(s < t);
        CHECK(a8.at(s, t) == 0.5);
      }
    }
  }
  CHECK(nz == 28);
  CHECK(acyclic_params(2, 1.0, uniform_rho(2)).prob == std::vector<double>{0, 1, 0, 0});
  CHECK(acyclic_params(1, 0.5, uniform_rho(1)).prob == std::vector<double>{0});
  CHECK_THROWS_AS(cycle_params(3, 0.0, uniform_rho(3)), Error);
}

TEST_CASE("benchmark block distribution") {
  const double raw = std::accumulate(kBenchmarkRhoRaw.begin(), kBenchmarkRhoRaw.end(), 0.0);
  CHECK(raw == doctest::Approx(1.01));
  const auto rho = benchmark_rho();
  REQUIRE(rho.size() == 8);
  CHECK(std::accumulate(rho.begin(), rho.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(rho[i] > 0.0);
    CHECK(rho[i] == doctest::Approx(kBenchmarkRhoRaw[i] / 1.01));
  }
}

TEST_CASE("perturbation_params") {
  for (double x : perturbation_params(4, 0.0, 3, uniform_rho(4)).prob) CHECK(x == 0.0);
  const auto a = perturbation_params(5, 1.0, 9, uniform_rho(5));
  const auto b = perturbation_params(5, 1.0, 9, uniform_rho(5));
  CHECK(a.prob == b.prob);
  for (double x : perturbation_params(5, 0.3, 4, uniform_rho(5)).prob) CHECK(x <= 0.3);
  CHECK_THROWS_AS(perturbation_params(3, 1.5, 0, uniform_rho(3)), Error);
}

TEST_CASE("union_perturb") {
  const auto base = sample_sbm(cycle_params(4, 0.5, uniform_rho(4)), 60, 1);
  SbmParams zero{4, uniform_rho(4), std::vector<double>(16, 0.0)};
  CHECK(same_graph(union_perturb(base, zero, 2).graph, base.graph));

  SbmParams none{4, uniform_rho(4), std::vector<double>(16, 0.0)};
  LabeledGraph empty{sample_sbm(none, 60, 3).graph, base.tau, 4};
  const auto noise = perturbation_params(4, 0.4, 5, uniform_rho(4));
  const auto only_noise = union_perturb(empty, noise, 6);
  const auto drawn = sample_sbm(noise, 60, 6);
  CHECK(same_graph(only_noise.graph, drawn.graph));
  CHECK(only_noise.tau == base.tau);

  const auto h = union_perturb(base, noise, 6);
  std::size_t shared = 0;
  for (const Edge& e : drawn.graph.edges()) shared += base.graph.has_edge(e.src, e.dst);
  CHECK(h.graph.edge_count() == base.graph.edge_count() + drawn.graph.edge_count() - shared);
  for (const Edge& e : h.graph.edges()) CHECK(e.weight == 1.0);
}

TEST_CASE("combine_twin_sbm") {
  const auto params = cycle_params(3, 0.4, uniform_rho(3));
  const auto split = combine_twin_sbm(params, 50, 0.0, 1);
  CHECK(split.graph.node_count() == 100);
  for (const Edge& e : split.graph.edges()) CHECK((e.src < 50) == (e.dst < 50));
  // Exactly two weak components: each half is connected through its cycle.
  std::vector<NodeId> first{0};
  const auto fwd = reachable_from(split.graph, first, false);
  const auto bwd = reachable_from(split.graph, first, true);
  for (NodeId u = 0; u < 100; ++u) {
    if (u >= 50) CHECK_FALSE((fwd[u] || bwd[u]));
  }

  // alpha = 1: cross-edge density matches within-copy density.
  const auto one = combine_twin_sbm(params, 400, 1.0, 2);
  double within = 0, cross = 0, within_pairs = 0, cross_pairs = 0;
  for (const Edge& e : one.graph.edges()) ((e.src < 400) == (e.dst < 400) ? within : cross) += 1;
  std::vector<double> a(3, 0), b(3, 0);
  for (NodeId u = 0; u < 800; ++u) (u < 400 ? a : b)[one.tau[u]] += 1;
  for (std::size_t s = 0; s < 3; ++s) {
    const std::size_t t = (s + 1) % 3;
    within_pairs += a[s] * a[t] + b[s] * b[t];
    cross_pairs += a[s] * b[t] + b[s] * a[t];
  }
  CHECK(std::abs(within / within_pairs - cross / cross_pairs) < 0.02);
  CHECK_FALSE(has_self_loop(one.graph));
}

TEST_CASE("nested_block_cycle") {
  const auto pure = nested_block_cycle(4, 200, 0.1, 0, 3);
  for (const Edge& e : pure.graph.edges()) CHECK(pure.tau[e.dst] == (pure.tau[e.src] + 1) % 4);
  CHECK(strongly_connected(pure.graph));

  const auto nested = nested_block_cycle(4, 200, 0.1, pure.graph.edge_count(), 3);
  CHECK(nested.graph.edge_count() == 2 * pure.graph.edge_count());
  for (const Edge& e : nested.graph.edges()) {
    CHECK((nested.tau[e.src] < nested.tau[e.dst] || nested.tau[e.src] == 3 ||
           nested.tau[e.dst] == (nested.tau[e.src] + 1) % 4));
    CHECK(e.src != e.dst);
  }

  // Same seed, more edges: the smaller edge set is a subset.
  const auto small = nested_block_cycle(4, 200, 0.1, 100, 3);
  for (const Edge& e : small.graph.edges()) CHECK(nested.graph.has_edge(e.src, e.dst));

  CHECK_THROWS_AS(nested_block_cycle(2, 6, 0.9, 1000, 1), Error);
}

TEST_CASE("generators are deterministic and loop-free") {
  const auto params = acyclic_params(3, 0.3, uniform_rho(3));
  CHECK(same_graph(sample_sbm(params, 80, 4).graph, sample_sbm(params, 80, 4).graph));
  CHECK_FALSE(same_graph(sample_sbm(params, 80, 4).graph, sample_sbm(params, 80, 5).graph));
  CHECK(same_graph(combine_twin_sbm(params, 40, 0.2, 4).graph, combine_twin_sbm(params, 40, 0.2, 4).graph));
  const auto base = sample_sbm(params, 80, 4);
  const auto r1 = random_edge_perturb(base, 50, 8);
  CHECK(same_graph(r1.graph, random_edge_perturb(base, 50, 8).graph));
  CHECK(r1.graph.edge_count() == base.graph.edge_count() + 50);
  CHECK_FALSE(has_self_loop(r1.graph));

  const auto w = weighted_block_cycle(5, 100, 0.05, 7);
  CHECK(strongly_connected(w.graph));
  for (const Edge& e : w.graph.edges()) CHECK(w.tau[e.dst] == (w.tau[e.src] + 1) % 5);
  for (NodeId u = 0; u < 100; ++u) CHECK(w.graph.out_degree(u) > 0.0);
}

}  // TEST_SUITE
