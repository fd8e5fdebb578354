#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "blockspec/clusterkit.hpp"
#include "blockspec/error.hpp"
#include "blockspec/metrics.hpp"
#include "blockspec/synth.hpp"
#include "support.hpp"

using namespace blockspec;

namespace {

PointSet points_of(std::size_t dim, const std::vector<double>& flat) {
  return {flat.size() / dim, dim, flat};
}

// Minimum inertia over every labeling of the points, centroids being means.
double brute_force_min_inertia(const PointSet& pts, std::size_t k) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < pts.count; ++i) total *= k;
  double best = INFINITY;
  Labels lab(pts.count);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& l : lab) {
      l = static_cast<Label>(c % k);
      c /= k;
    }
    std::vector<double> sum(k * pts.dim, 0.0);
    std::vector<std::size_t> cnt(k, 0);
    for (std::size_t i = 0; i < pts.count; ++i) {
      ++cnt[lab[i]];
      for (std::size_t d = 0; d < pts.dim; ++d) sum[lab[i] * pts.dim + d] += pts.values[i * pts.dim + d];
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < pts.count; ++i) {
      for (std::size_t d = 0; d < pts.dim; ++d) {
        const double diff = pts.values[i * pts.dim + d] - sum[lab[i] * pts.dim + d] / static_cast<double>(cnt[lab[i]]);
        inertia += diff * diff;
      }
    }
    best = std::min(best, inertia);
  }
  return best;
}

SpectrumResult fake_spectrum(const std::vector<cplx>& values, std::size_t n) {
  SpectrumResult s;
  s.converged = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = std::polar(1.0, static_cast<double>(i * j));
    s.pairs.push_back({values[i], v, 0.0});
  }
  return s;
}

}  // namespace

TEST_SUITE("clusterkit") {

TEST_CASE("build_embedding filters") {
  const std::vector<cplx> four{1.0, cplx(0, 1), cplx(0, -1), -1.0};
  const auto s = fake_spectrum(four, 8);
  const auto all = build_embedding(s, 4, EigenFilter::AllK);
  CHECK(all.cols == 4);
  CHECK(all.rows == 8);
  CHECK(all.source_eigenvalues == four);
  CHECK_FALSE(all.filter_fell_back);

  const auto pos = build_embedding(s, 4, EigenFilter::PositiveImaginary);
  REQUIRE(pos.cols == 1);
  CHECK(pos.source_eigenvalues[0] == cplx(0, 1));

  const auto two = build_embedding(fake_spectrum({1.0, -1.0}, 8), 2, EigenFilter::PositiveImaginary);
  CHECK(two.filter_fell_back);
  CHECK(two.cols == 2);

  CHECK_THROWS_AS(build_embedding(s, 5, EigenFilter::AllK), Error);
}

TEST_CASE("k = 1 embedding of an aperiodic chain is a constant column") {
  const auto g = testing::random_strong_graph(30, 0.2, 1);
  const auto s = top_modulus_eigenpairs(transition_P(g), 1, 1e-10, 2000, 0);
  const auto emb = build_embedding(s, 1, EigenFilter::PositiveImaginary);
  REQUIRE(emb.cols == 1);
  CHECK(std::abs(emb.source_eigenvalues[0] - 1.0) < 1e-9);
  for (std::size_t i = 1; i < emb.rows; ++i) CHECK(std::abs(emb.at(i, 0) - emb.at(0, 0)) < 1e-8);
  for (std::size_t i = 0; i < emb.rows; ++i) CHECK(std::abs(std::abs(emb.at(i, 0)) - 1.0 / std::sqrt(30.0)) < 1e-8);
}

TEST_CASE("points on roots of unity are recovered with zero inertia") {
  EmbeddingMatrix emb;
  emb.rows = 20;
  emb.cols = 1;
  Labels truth(20);
  for (std::size_t i = 0; i < 20; ++i) {
    truth[i] = static_cast<Label>(i % 5);
    emb.values.push_back(std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(i % 5) / 5));
  }
  const auto r = kmeans(emb, {5, 10, 300, 3});
  CHECK(r.inertia < 1e-20);
  CHECK(block_membership_error(truth, r.assignment, 5) == 0.0);
}

TEST_CASE("k = 1 puts everything in one cluster at the mean") {
  const auto pts = points_of(2, {0, 0, 2, 0, 0, 4, 2, 4});
  const auto r = kmeans(pts, {1, 3, 100, 0});
  for (Label l : r.assignment) CHECK(l == 0);
  CHECK(r.centroids[0] == doctest::Approx(1.0));
  CHECK(r.centroids[1] == doctest::Approx(2.0));
}

TEST_CASE("12 points in 3 groups match the exhaustive minimum inertia") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed);
    std::vector<double> flat;
    const double centers[3][2] = {{0, 0}, {5, 1}, {2, 6}};
    for (int i = 0; i < 12; ++i) {
      flat.push_back(centers[i % 3][0] + unit_uniform(rng) - 0.5);
      flat.push_back(centers[i % 3][1] + unit_uniform(rng) - 0.5);
    }
    const auto pts = points_of(2, flat);
    const auto r = kmeans(pts, {3, 10, 300, seed});
    CHECK(r.inertia == doctest::Approx(brute_force_min_inertia(pts, 3)).epsilon(1e-12));
  }
}

TEST_CASE("inertia trace is non-increasing and inertia is recomputable") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed);
    const std::size_t n = 60, dim = 3;
    std::vector<double> flat(n * dim);
    for (auto& x : flat) x = unit_uniform(rng);
    const auto pts = points_of(dim, flat);
    const std::size_t k = 2 + seed % 7;
    const auto r = kmeans(pts, {k, 3, 300, seed});
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i) CHECK(r.inertia_trace[i] <= r.inertia_trace[i - 1] + 1e-12);
    CHECK(inertia_of(pts, r.assignment, r.centroids) == doctest::Approx(r.inertia).epsilon(1e-12));
    std::set<Label> used(r.assignment.begin(), r.assignment.end());
    CHECK(used.size() == k);
    for (Label l : r.assignment) CHECK(l < k);
  }
}

TEST_CASE("empty clusters are repaired when enough distinct points exist") {
  // Two tight clumps plus three stragglers; k = 5 forces singleton clusters.
  const auto pts = points_of(1, {0, 0, 0, 0, 10, 10, 10, 10, 3, 6, 8});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = kmeans(pts, {5, 1, 300, seed});
    std::set<Label> used(r.assignment.begin(), r.assignment.end());
    CHECK(used.size() == 5);
  }
}

TEST_CASE("a global phase on an embedding column leaves the clustering unchanged") {
  const auto lg = weighted_block_cycle(5, 80, 0.1, 2);
  const auto base = random_edge_perturb(lg, 200, 8);
  const auto s = top_modulus_eigenpairs(transition_P(base.graph), 5, 1e-10, 2000, 0);
  const auto emb = build_embedding(s, 5, EigenFilter::AllK);
  for (double theta : {0.3, 1.7, 3.0}) {
    EmbeddingMatrix rot = emb;
    for (std::size_t i = 0; i < rot.rows; ++i) rot.at(i, 2) *= std::polar(1.0, theta);
    const auto a = kmeans(emb, {5, 10, 300, 4});
    const auto b = kmeans(rot, {5, 10, 300, 4});
    CHECK(a.inertia == doctest::Approx(b.inertia).epsilon(1e-9));
    CHECK(block_membership_error(a.assignment, b.assignment, 5) == 0.0);
  }
}

TEST_CASE("kmeans argument checks") {
  const auto pts = points_of(1, {0, 1});
  CHECK_THROWS_AS(kmeans(pts, {3, 1, 10, 0}), Error);
  CHECK_THROWS_AS(kmeans(pts, {1, 0, 10, 0}), Error);
}

}  // TEST_SUITE
