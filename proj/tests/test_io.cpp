#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>

#include "blockspec/benchmark.hpp"
#include "blockspec/error.hpp"
#include "blockspec/io.hpp"
#include "blockspec/transition.hpp"
#include "support.hpp"

using namespace blockspec;

namespace {

ParsedGraph parse(const std::string& text, EdgeListOptions opt = {}) {
  std::istringstream in(text);
  return parse_edge_list(in, opt);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("integer edge lists") {
  const ParsedGraph p = parse("# header\n0 1\n1\t2\n\n2 0\n");
  CHECK(p.graph.node_count() == 3);
  CHECK(p.graph.edge_count() == 3);
  CHECK(p.graph.has_edge(2, 0));
  CHECK(p.warnings.empty());

  const ParsedGraph sparse = parse("10 30\n30 20\n");
  CHECK(sparse.graph.node_count() == 3);
  CHECK(sparse.ids.name(0) == "10");
  CHECK(sparse.ids.name(2) == "30");
  CHECK(sparse.graph.has_edge(0, 2));
  CHECK(sparse.graph.has_edge(2, 1));
  CHECK(sparse.warnings.size() == 1);

  // Repeated edges sum.
  CHECK(parse("0 1\n0 1\n1 0\n").graph.weight(0, 1) == 2.0);
}

TEST_CASE("weighted, delimited and string-id edge lists") {
  EdgeListOptions opt;
  opt.weighted = true;
  opt.delimiter = ',';
  const ParsedGraph p = parse("0,1,2.5\n1,0,0.25\n", opt);
  CHECK(p.graph.weight(0, 1) == 2.5);
  CHECK(p.graph.weight(1, 0) == 0.25);

  EdgeListOptions s;
  s.id_mode = IdMode::String;
  const ParsedGraph q = parse("b a\na c\n", s);
  CHECK(q.ids.name(0) == "b");
  CHECK(q.ids.name(1) == "a");
  CHECK(q.ids.name(2) == "c");
  CHECK(q.graph.has_edge(1, 2));
  CHECK(q.ids.find("c") == NodeId{2});
  CHECK(!q.ids.find("z"));
}

TEST_CASE("edge list errors carry a category and line") {
  CHECK(kind_of([] { parse(""); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse("# nothing\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse("0 a\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse("0\n"); }) == ErrorKind::Parse);
  CHECK(parse("0 0\n").graph.weight(0, 0) == 1.0);
  EdgeListOptions w;
  w.weighted = true;
  CHECK(kind_of([&] { parse("0 1 -1\n", w); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse("0 1 x\n", w); }) == ErrorKind::Parse);
  try {
    parse("0 1\n1 2\nbad\n");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(kind_of([] { read_edge_list("/nonexistent/path/graph.txt"); }) == ErrorKind::Io);
}

TEST_CASE("AS relationships become payment edges") {
  std::istringstream in("# source: test\n1|2|-1\n2|3|0\n");
  const ParsedGraph p = parse_as_rel(in);
  const NodeId a1 = *p.ids.find("1"), a2 = *p.ids.find("2"), a3 = *p.ids.find("3");
  CHECK(p.graph.has_edge(a2, a1));
  CHECK(!p.graph.has_edge(a1, a2));
  CHECK(p.graph.has_edge(a2, a3));
  CHECK(p.graph.has_edge(a3, a2));
  CHECK(p.graph.edge_count() == 3);

  std::istringstream bad("1|2|7\n");
  CHECK(kind_of([&] { parse_as_rel(bad); }) == ErrorKind::Parse);
}

TEST_CASE("edge list write and read round trip") {
  const DirectedGraph g = testing::random_graph(12, 0.3, 1);
  std::ostringstream out;
  write_edge_list(out, g, IdMap::identity(12));
  EdgeListOptions opt;
  opt.weighted = true;
  const ParsedGraph back = parse(out.str(), opt);
  REQUIRE(back.graph.node_count() <= 12);
  for (const Edge& e : g.edges()) {
    const NodeId s = *back.ids.find(std::to_string(e.src)), d = *back.ids.find(std::to_string(e.dst));
    CHECK(back.graph.weight(s, d) == e.weight);
  }
  CHECK(back.graph.edge_count() == g.edge_count());
}

TEST_CASE("format_double round trips exactly") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(unit_uniform(rng) - 0.5, static_cast<int>(uniform_index(rng, 200)) - 100);
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(parse_double("+2.5") == 2.5);
  CHECK(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
  CHECK(kind_of([] { parse_double("1.5x"); }) == ErrorKind::Parse);
}

TEST_CASE("spectrum CSV for a directed 3-cycle") {
  const DirectedGraph g = testing::graph_of(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  const SpectrumResult s = top_modulus_eigenpairs(transition_P(g), 3, 1e-12, 100, 0);
  std::ostringstream out;
  emit_spectrum_csv(out, s);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "re,im,modulus,residual");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 4);
    CHECK(std::abs(parse_double(f[2]) - 1.0) < 1e-10);
    CHECK(parse_double(f[3]) < 1e-10);
    const cplx z(parse_double(f[0]), parse_double(f[1]));
    CHECK(std::abs(z * z * z - 1.0) < 1e-9);
  }
  CHECK(rows == 3);
}

TEST_CASE("assignment JSON round trip") {
  BlockAssignment a;
  a.k = 3;
  a.labels = {2, 0, 1, 1};
  a.ranked = true;
  a.provenance.algorithm = "bcs";
  a.provenance.seed = 77;
  a.provenance.eigenvalues = {cplx(1, 0), cplx(-0.5, 0.8)};
  a.provenance.deleted_block_edges = {{1, 2}};
  IdMap ids;
  for (const char* name : {"x", "y", "z", "w"}) ids.intern(name);
  const std::string text = assignment_json(a, ids, 0.75);
  const AssignmentDocument doc = parse_assignment_json(text);
  CHECK(doc.algorithm == "bcs");
  CHECK(doc.k == 3);
  CHECK(doc.seed == 77);
  CHECK(doc.ranked);
  CHECK(doc.acyclicity == 0.75);
  CHECK(doc.labels_for(ids) == a.labels);
  CHECK(assignment_json(a, ids, 0.75) == text);

  CHECK(kind_of([] { parse_assignment_json("{"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_assignment_json(R"({"algorithm":"bcs","k":2,"seed":0,"labels":{"a":5}})"); }) ==
        ErrorKind::Parse);
  IdMap other;
  other.intern("q");
  CHECK(kind_of([&] { doc.labels_for(other); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("run records round trip") {
  RunRecord r;
  r.family = "cycle";
  r.algorithm = "bcs";
  r.n = 100;
  r.k = 4;
  r.epsilon = 0.1;
  r.seed = "123";
  r.error = 1.0 / 3.0;
  r.one_minus_nmi = 0.2;
  r.acyclicity = std::numeric_limits<double>::quiet_NaN();
  r.version = "x";
  r.status = "failed:a,b";
  std::ostringstream out;
  write_run_records(out, {r});
  std::istringstream in(out.str());
  const auto back = read_run_records(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].error == r.error);
  CHECK(back[0].epsilon == r.epsilon);
  CHECK(std::isnan(back[0].acyclicity));
  CHECK(back[0].status == "failed:a;b");
  CHECK(back[0].seed == "123");
  CHECK(kind_of([] { parse_run_record("a,b"); }) == ErrorKind::Parse);
}

TEST_CASE("benchmark record layout and noiseless recovery") {
  BenchmarkConfig c;
  c.n = 200;
  c.k = 4;
  c.epsilons = {0.0, 0.2};
  c.seeds = 3;
  c.algorithms = {"bcs", "svd"};
  c.threads = 2;
  const auto records = run_benchmark(c);
  CHECK(records.size() == 2 * 3 * 2 + 2 * 2);
  std::size_t medians = 0;
  for (const RunRecord& r : records) {
    if (r.seed == "median") {
      ++medians;
      CHECK(r.status == "aggregate");
    } else {
      CHECK(r.status == "ok");
      CHECK(r.runtime_ms == 0.0);
    }
    if (r.algorithm == "bcs" && r.epsilon == 0.0) CHECK(r.error == 0.0);
  }
  CHECK(medians == 4);

  // Thread count does not change results.
  c.threads = 1;
  const auto serial = run_benchmark(c);
  for (std::size_t i = 0; i < records.size(); ++i) CHECK(to_csv_row(serial[i]) == to_csv_row(records[i]));

  c.algorithms = {"nope"};
  CHECK(kind_of([&] { run_benchmark(c); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("benchmark instances reuse the base graph across epsilon") {
  BenchmarkConfig c;
  c.n = 120;
  c.k = 3;
  const LabeledGraph base = benchmark_instance(c, 0.0, 1);
  const LabeledGraph noisy = benchmark_instance(c, 0.3, 1);
  CHECK(base.tau == noisy.tau);
  for (const Edge& e : base.graph.edges()) CHECK(noisy.graph.has_edge(e.src, e.dst));
  CHECK(noisy.graph.edge_count() > base.graph.edge_count());
  CHECK(parse_family("twin-acyclic") == Family::TwinAcyclic);
  CHECK(to_string(Family::TwinCycle) == "twin-cycle");
}

}  // TEST_SUITE
