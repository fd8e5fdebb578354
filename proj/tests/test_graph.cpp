#include <doctest.h>

#include <cmath>

#include "blockspec/error.hpp"
#include "blockspec/transition.hpp"
#include "support.hpp"

using namespace blockspec;
using testing::graph_of;

TEST_SUITE("graph") {

TEST_CASE("build_graph handles empty, cycle and duplicate input") {
  const auto empty = graph_of(3, {});
  CHECK(empty.node_count() == 3);
  CHECK(empty.edge_count() == 0);
  for (NodeId u = 0; u < 3; ++u) CHECK(empty.out_degree(u) == 0.0);

  const auto cyc = graph_of(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  for (NodeId u = 0; u < 3; ++u) {
    CHECK(cyc.out_degree(u) == 1.0);
    CHECK(cyc.in_degree(u) == 1.0);
  }

  const auto dup = graph_of(2, {{0, 1, 2}, {0, 1, 3}});
  CHECK(dup.edge_count() == 1);
  CHECK(dup.weight(0, 1) == 5.0);
  CHECK(dup.out_degree(0) == 5.0);
}

TEST_CASE("build_graph rejects bad input") {
  CHECK_THROWS_AS(graph_of(2, {{0, 1, 0.0}}), Error);
  CHECK_THROWS_AS(graph_of(2, {{0, 1, -1.0}}), Error);
  CHECK_THROWS_AS(graph_of(2, {{0, 2, 1.0}}), Error);
  CHECK_THROWS_AS(graph_of(2, {{0, 1, NAN}}), Error);
  CHECK_THROWS_AS(graph_of(0, {}), Error);
}

TEST_CASE("degree caches match a recomputation from the edge list") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_graph(25, 0.2, seed);
    std::vector<double> out(25, 0.0), in(25, 0.0);
    for (NodeId u = 0; u < 25; ++u) {
      const auto nb = g.out_neighbors(u);
      const auto w = g.out_weights(u);
      for (std::size_t e = 0; e < nb.size(); ++e) {
        CHECK(w[e] > 0.0);
        out[u] += w[e];
      }
    }
    for (NodeId v = 0; v < 25; ++v) {
      const auto w = g.in_weights(v);
      for (double x : w) in[v] += x;
    }
    for (NodeId u = 0; u < 25; ++u) {
      CHECK(g.out_degree(u) == out[u]);
      CHECK(g.in_degree(u) == doctest::Approx(in[u]).epsilon(1e-14));
    }
  }
}

TEST_CASE("transition_P entries") {
  const auto cyc = graph_of(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  const auto p = transition_P(cyc).to_dense();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(p(i, j) == (j == (i + 1) % 3 ? 1.0 : 0.0));
  }

  const auto split = transition_P(graph_of(3, {{0, 1, 1}, {0, 2, 1}}));
  CHECK(split.entry(0, 0) == 0.0);
  CHECK(split.entry(0, 1) == 0.5);
  CHECK(split.entry(0, 2) == 0.5);
  CHECK(split.row_sum(1) == 0.0);

  const auto uneven = transition_P(graph_of(3, {{0, 1, 3}, {0, 2, 1}}));
  CHECK(uneven.entry(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(uneven.entry(0, 2) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("transition_Pa replaces dangling rows with 1/n") {
  const auto two = transition_Pa(graph_of(2, {{0, 1, 1}}));
  CHECK(two.entry(1, 0) == 0.5);
  CHECK(two.entry(1, 1) == 0.5);

  const auto none = transition_Pa(graph_of(4, {}));
  for (NodeId i = 0; i < 4; ++i) {
    for (NodeId j = 0; j < 4; ++j) CHECK(none.entry(i, j) == 0.25);
  }

  const auto chain = transition_Pa(graph_of(3, {{0, 1, 1}, {1, 2, 1}})).to_dense();
  Eigen::MatrixXd expect(3, 3);
  expect << 0, 1, 0, 0, 0, 1, 1.0 / 3, 1.0 / 3, 1.0 / 3;
  CHECK((chain - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("row sums and the all-ones fixed point on random graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 5 + seed % 17;
    const auto g = testing::random_graph(n, 0.15, 100 + seed);
    const auto p = transition_P(g);
    const auto pa = transition_Pa(g);
    for (NodeId i = 0; i < n; ++i) {
      if (g.out_degree(i) > 0) {
        CHECK(std::abs(p.row_sum(i) - 1.0) <= 1e-12);
      } else {
        CHECK(p.row_sum(i) == 0.0);
      }
      CHECK(std::abs(pa.row_sum(i) - 1.0) <= 1e-12);
    }
    std::vector<cplx> ones(n, 1.0), y(n);
    pa.apply(ones, y);
    for (const cplx& v : y) CHECK(std::abs(v - 1.0) <= 1e-12);
  }
}

TEST_CASE("matrix-free products match a dense product built from W and d_out") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 12;
    const auto g = testing::random_graph(n, 0.25, 7 + seed);
    for (const bool uniform : {false, true}) {
      const TransitionOperator op(g, uniform ? TransitionKind::UniformDangling : TransitionKind::RowStochastic);
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
      for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = 0; j < n; ++j) {
          if (g.out_degree(i) > 0) {
            m(i, j) = g.weight(i, j) / g.out_degree(i);
          } else if (uniform) {
            m(i, j) = 1.0 / static_cast<double>(n);
          }
        }
      }
      Rng rng(seed);
      std::vector<cplx> x(n), y(n), yt(n);
      Eigen::VectorXcd xv(n);
      for (std::size_t i = 0; i < n; ++i) xv(i) = x[i] = cplx(unit_uniform(rng) - 0.5, unit_uniform(rng) - 0.5);
      op.apply(x, y);
      op.apply_transpose(x, yt);
      const Eigen::VectorXcd ref = m * xv;
      const Eigen::VectorXcd ref_t = m.transpose() * xv;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(y[i] - ref(i)) < 1e-14);
        CHECK(std::abs(yt[i] - ref_t(i)) < 1e-14);
      }
    }
  }
}

TEST_CASE("asymmetric_part") {
  CHECK(asymmetric_part(graph_of(2, {{0, 1, 2}, {1, 0, 2}})).edge_count() == 0);
  const auto net = asymmetric_part(graph_of(2, {{0, 1, 3}, {1, 0, 1}}));
  CHECK(net.edge_count() == 1);
  CHECK(net.weight(0, 1) == 2.0);
  const auto one = asymmetric_part(graph_of(2, {{1, 0, 4}}));
  CHECK(one.edge_count() == 1);
  CHECK(one.weight(1, 0) == 4.0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_graph(15, 0.3, 300 + seed);
    const auto once = asymmetric_part(g);
    const auto twice = asymmetric_part(once);
    const auto e1 = once.edges(), e2 = twice.edges();
    REQUIRE(e1.size() == e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i) {
      CHECK(e1[i].src == e2[i].src);
      CHECK(e1[i].dst == e2[i].dst);
      CHECK(e1[i].weight == e2[i].weight);
      CHECK(!once.has_edge(e1[i].dst, e1[i].src));
    }
  }
}

TEST_CASE("strongly_connected") {
  CHECK(strongly_connected(graph_of(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}})));
  CHECK_FALSE(strongly_connected(graph_of(3, {{0, 1, 1}, {1, 2, 1}})));
  CHECK_FALSE(strongly_connected(graph_of(4, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}})));
  CHECK(strongly_connected(graph_of(1, {})));
}

}  // TEST_SUITE
