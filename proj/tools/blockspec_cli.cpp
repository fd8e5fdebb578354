#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockspec/baselines.hpp"
#include "blockspec/benchmark.hpp"
#include "blockspec/blockalgo.hpp"
#include "blockspec/error.hpp"
#include "blockspec/io.hpp"
#include "blockspec/kernels.hpp"
#include "blockspec/metrics.hpp"
#include "blockspec/synth.hpp"

namespace bs = blockspec;
using nlohmann::json;

namespace {

struct GraphInput {
  std::string path;
  bool weighted = false;
  std::string delimiter;
  bool string_ids = false;
  bool as_rel = false;
  bool asymmetric = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input,-i", path, "Edge list file (src dst [weight] per line)")->required();
    cmd->add_flag("--weighted", weighted, "Read a third column as the edge weight");
    cmd->add_option("--delimiter", delimiter, "Field delimiter: a single character, 'tab' or 'comma' (default: whitespace)");
    cmd->add_flag("--string-ids", string_ids, "Treat node ids as opaque strings");
    cmd->add_flag("--as-rel", as_rel, "Input is an AS relationship file (a|b|-1 or a|b|0)");
    cmd->add_flag("--asymmetric", asymmetric, "Keep only the asymmetric part (W - W^T)_+ before analysis");
  }

  bs::ParsedGraph load() const {
    bs::ParsedGraph pg;
    if (as_rel) {
      pg = bs::read_as_rel(path);
    } else {
      bs::EdgeListOptions opt;
      opt.weighted = weighted;
      opt.id_mode = string_ids ? bs::IdMode::String : bs::IdMode::Integer;
      if (delimiter == "tab") {
        opt.delimiter = '\t';
      } else if (delimiter == "comma") {
        opt.delimiter = ',';
      } else if (delimiter.size() == 1) {
        opt.delimiter = delimiter[0];
      } else if (!delimiter.empty()) {
        bs::fail(bs::ErrorKind::InvalidArgument, "delimiter must be one character, 'tab' or 'comma'");
      }
      pg = bs::read_edge_list(path, opt);
    }
    if (asymmetric) pg.graph = bs::asymmetric_part(pg.graph);
    for (const auto& w : pg.warnings) std::cerr << "warning: " << w << '\n';
    return pg;
  }
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    bs::write_file(out_path, text);
  }
}

std::string assignment_text(const bs::BlockAssignment& a, const bs::IdMap& ids, const std::string& format,
                            std::optional<double> acyclicity) {
  for (const auto& w : a.provenance.warnings) std::cerr << "warning: " << w << '\n';
  if (format == "csv") {
    std::ostringstream ss;
    ss << "node,label\n";
    for (bs::NodeId i = 0; i < a.labels.size(); ++i) ss << ids.name(i) << ',' << a.labels[i] << '\n';
    return ss.str();
  }
  return bs::assignment_json(a, ids, acyclicity);
}

bs::BlockAssignment from_document(const bs::AssignmentDocument& doc, const bs::IdMap& ids) {
  bs::BlockAssignment a;
  a.labels = doc.labels_for(ids);
  a.k = doc.k;
  a.ranked = doc.ranked;
  a.provenance.algorithm = doc.algorithm;
  a.provenance.seed = doc.seed;
  return a;
}

std::optional<bs::EigenFilter> parse_filter(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s == "all" ? bs::EigenFilter::AllK : bs::EigenFilter::PositiveImaginary;
}

std::vector<double> read_scores(const std::string& path, const bs::IdMap& ids) {
  std::ifstream in(path);
  if (!in) bs::fail(bs::ErrorKind::Io, "cannot open " + path);
  std::map<std::string, double> by_name;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line) {
      if (c == ',' || c == '\t') c = ' ';
    }
    std::istringstream ss(line);
    std::string name, value;
    if (!(ss >> name) || name[0] == '#') continue;
    if (!(ss >> value)) bs::fail(bs::ErrorKind::Parse, path + ": line " + std::to_string(lineno) + ": expected 'node score'");
    try {
      by_name[name] = bs::parse_double(value);
    } catch (const bs::Error&) {
      if (lineno == 1) continue;  // header
      throw;
    }
  }
  std::vector<double> scores(ids.size());
  for (bs::NodeId i = 0; i < ids.size(); ++i) {
    const auto it = by_name.find(ids.name(i));
    if (it == by_name.end()) bs::fail(bs::ErrorKind::InvalidArgument, "no score for node '" + ids.name(i) + "'");
    scores[i] = it->second;
  }
  return scores;
}

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(bs::parse_double(item));
  return out;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

int exit_code(bs::ErrorKind kind) {
  switch (kind) {
    case bs::ErrorKind::InvalidArgument: return 2;
    case bs::ErrorKind::Parse: return 3;
    case bs::ErrorKind::Numerical: return 4;
    case bs::ErrorKind::Io: return 5;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-cyclic and block-acyclic spectral clustering of directed graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bs::library_version()));
  std::string kernels = "auto";
  app.add_option("--kernels", kernels, "SIMD kernel table: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->each([](const std::string& v) {
        if (!bs::kernels::select(v)) throw CLI::ValidationError("--kernels", "kernel table '" + v + "' is not available on this CPU");
      });

  std::string out_path;
  std::string format = "json";
  std::string table_format = "csv";
  std::uint64_t seed = 0;
  std::size_t k = 0;
  double tol = 1e-8;
  std::string filter;
  std::size_t dense_cap = bs::kDefaultDenseCap;
  int restarts = 10;
  int max_restarts = 2000;

  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out,-o", out_path, "Output file (default: stdout)"); };
  auto add_format = [](CLI::App* cmd, std::string& target, std::vector<std::string> allowed) {
    cmd->add_option("--format", target, "Output format")->check(CLI::IsMember(allowed));
  };
  auto add_spectral = [&](CLI::App* cmd) {
    cmd->add_option("--k", k, "Number of blocks")->required();
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--tol", tol, "Eigensolver tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--filter", filter, "Eigenvector filter: posimag or all (default: posimag for bcs, all for bas)")->check(CLI::IsMember({"all", "posimag"}));
    cmd->add_option("--restarts", restarts, "k-means restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--max-restarts", max_restarts, "Eigensolver restart budget")->check(CLI::PositiveNumber);
  };

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a synthetic graph with ground-truth blocks");
  std::string family = "cycle";
  std::size_t n = 1000;
  double p = -1.0, epsilon = 0.0, alpha = 0.1, density = 0.1;
  std::size_t extra = 0;
  bool uniform = false;
  std::string truth_path;
  gen->add_option("--family", family, "cycle, acyclic, twin-cycle, twin-acyclic, nested, weighted-cycle")
      ->check(CLI::IsMember({"cycle", "acyclic", "twin-cycle", "twin-acyclic", "nested", "weighted-cycle"}));
  gen->add_option("--n", n, "Total node count");
  gen->add_option("--k", k, "Number of blocks")->required();
  gen->add_option("--p", p, "Structural edge probability (default 0.7 cyclic, 0.5 acyclic, 0.1 nested)");
  gen->add_option("--epsilon", epsilon, "Perturbation magnitude for SBM families")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--alpha", alpha, "Cross-edge factor for twin families")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--extra", extra, "Appended nested edges (nested family)");
  gen->add_option("--density", density, "Extra edge density (weighted-cycle family)")->check(CLI::Range(0.0, 1.0));
  gen->add_flag("--uniform-rho", uniform, "Uniform block distribution even when k = 8");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--truth", truth_path, "Write ground-truth labels as an assignment document");
  add_out(gen);
  gen->callback([&] {
    bs::LabeledGraph lg;
    if (family == "nested") {
      lg = bs::nested_block_cycle(k, n, p >= 0.0 ? p : 0.1, extra, seed);
    } else if (family == "weighted-cycle") {
      lg = bs::weighted_block_cycle(k, n, density, seed);
    } else {
      bs::BenchmarkConfig cfg;
      cfg.family = bs::parse_family(family);
      cfg.n = n;
      cfg.k = k;
      cfg.p = p;
      cfg.alpha = alpha;
      cfg.base_seed = seed;
      cfg.benchmark_rho = !uniform;
      lg = bs::benchmark_instance(cfg, epsilon, 0);
    }
    const bs::IdMap ids = bs::IdMap::identity(lg.graph.node_count());
    std::ostringstream ss;
    bs::write_edge_list(ss, lg.graph, ids);
    emit(out_path, ss.str());
    if (!truth_path.empty()) {
      bs::BlockAssignment truth;
      truth.labels = lg.tau;
      truth.k = lg.k;
      truth.provenance.algorithm = "truth";
      truth.provenance.seed = seed;
      bs::emit_assignment_json(truth, ids, truth_path);
    }
  });

  // perturb
  auto* pert = app.add_subcommand("perturb", "Add random edges to a graph");
  GraphInput pert_in;
  pert_in.attach(pert);
  std::optional<std::size_t> extra_edges;
  pert->add_option("--k", k, "Blocks of the perturbing SBM")->required();
  pert->add_option("--epsilon", epsilon, "Perturbation magnitude (SBM noise epsilon * Q)")->check(CLI::Range(0.0, 1.0));
  pert->add_option("--extra-edges", extra_edges, "Add this many uniformly random new edges instead of SBM noise");
  pert->add_option("--seed", seed, "Random seed");
  add_out(pert);
  pert->callback([&] {
    const bs::ParsedGraph pg = pert_in.load();
    const bs::LabeledGraph base{pg.graph, bs::Labels(pg.graph.node_count(), 0), 1};
    const bs::LabeledGraph h = extra_edges ? bs::random_edge_perturb(base, *extra_edges, seed)
                                           : bs::union_perturb(base, bs::perturbation_params(k, epsilon, bs::derive_seed(seed, 1), bs::uniform_rho(k)),
                                                               bs::derive_seed(seed, 2));
    std::ostringstream ss;
    bs::write_edge_list(ss, h.graph, pg.ids);
    emit(out_path, ss.str());
  });

  // bcs / bas
  GraphInput algo_in;
  bool do_rank = false, do_refine = false;
  auto spectral_cmd = [&](const char* name, const char* help, bool cyclic) {
    auto* cmd = app.add_subcommand(name, help);
    algo_in.attach(cmd);
    add_spectral(cmd);
    cmd->add_flag("--rank", do_rank, "Rank the blocks topologically");
    cmd->add_flag("--refine", do_refine, "Rank, then run one refinement pass");
    add_format(cmd, format, {"json", "csv"});
    add_out(cmd);
    cmd->callback([&, cyclic] {
      const bs::ParsedGraph pg = algo_in.load();
      bs::SpectralOptions so;
      so.tol = tol;
      so.seed = seed;
      so.restarts = restarts;
      so.max_restarts = max_restarts;
      so.filter = parse_filter(filter);
      bs::BlockAssignment a = cyclic ? bs::bcs(pg.graph, k, so) : bs::bas(pg.graph, k, so);
      std::optional<double> ca;
      if (do_rank || do_refine) {
        a = bs::rank_blocks(pg.graph, a);
        if (do_refine) a = bs::refine_assignment(pg.graph, a, bs::derive_seed(seed, 0x7EF1));
        ca = bs::acyclicity_score(pg.graph, a.labels);
      }
      emit(out_path, assignment_text(a, pg.ids, format, ca));
    });
  };
  spectral_cmd("bcs", "Block-cyclic spectral clustering", true);
  spectral_cmd("bas", "Block-acyclic spectral clustering", false);

  // rank / refine
  GraphInput post_in;
  std::string assignment_path;
  auto* rank = app.add_subcommand("rank", "Relabel blocks by a topological order of the block graph");
  post_in.attach(rank);
  rank->add_option("--assignment,-a", assignment_path, "Assignment document")->required();
  add_format(rank, format, {"json", "csv"});
  add_out(rank);
  rank->callback([&] {
    const bs::ParsedGraph pg = post_in.load();
    const bs::BlockAssignment a = bs::rank_blocks(pg.graph, from_document(bs::read_assignment_json(assignment_path), pg.ids));
    emit(out_path, assignment_text(a, pg.ids, format, bs::acyclicity_score(pg.graph, a.labels)));
  });

  auto* refine = app.add_subcommand("refine", "One pass of +/-1 rank moves that raise the acyclicity score");
  post_in.attach(refine);
  refine->add_option("--assignment,-a", assignment_path, "Ranked assignment document")->required();
  refine->add_option("--seed", seed, "Seed for the node order");
  add_format(refine, format, {"json", "csv"});
  add_out(refine);
  refine->callback([&] {
    const bs::ParsedGraph pg = post_in.load();
    const bs::BlockAssignment a =
        bs::refine_assignment(pg.graph, from_document(bs::read_assignment_json(assignment_path), pg.ids), seed);
    emit(out_path, assignment_text(a, pg.ids, format, bs::acyclicity_score(pg.graph, a.labels)));
  });

  // trophic
  auto* troph = app.add_subcommand("trophic", "Trophic levels of a food web (edges point prey -> predator)");
  GraphInput troph_in;
  troph_in.attach(troph);
  std::string mode = "diet";
  troph->add_option("--mode", mode, "diet (diet fractions) or paper (T = (I - P^T)^+ 1)")->check(CLI::IsMember({"diet", "paper"}));
  troph->add_option("--dense-cap", dense_cap, "Largest n for dense solves");
  add_format(troph, table_format, {"csv", "json"});
  add_out(troph);
  troph->callback([&] {
    const bs::ParsedGraph pg = troph_in.load();
    const bs::TrophicResult r =
        bs::trophic_levels(pg.graph, mode == "paper" ? bs::TrophicMode::PaperMatrix : bs::TrophicMode::DietFraction, dense_cap);
    if (r.used_fallback) std::cerr << "warning: diet iteration did not converge; used least-squares solve\n";
    if (table_format == "json") {
      json doc;
      doc["mode"] = mode;
      doc["used_fallback"] = r.used_fallback;
      json lv = json::object();
      for (bs::NodeId i = 0; i < r.levels.size(); ++i) lv[pg.ids.name(i)] = r.levels[i];
      doc["levels"] = std::move(lv);
      emit(out_path, doc.dump(2) + "\n");
    } else {
      std::ostringstream ss;
      ss << "node,level\n";
      for (bs::NodeId i = 0; i < r.levels.size(); ++i) ss << pg.ids.name(i) << ',' << bs::format_double(r.levels[i]) << '\n';
      emit(out_path, ss.str());
    }
  });

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Compare an assignment against ground truth or reference scores");
  std::string truth_doc, estimate_doc, graph_path, scores_path;
  eval->add_option("--truth", truth_doc, "Ground-truth assignment document");
  eval->add_option("--estimate", estimate_doc, "Estimated assignment document")->required();
  eval->add_option("--input,-i", graph_path, "Edge list, for the acyclicity score");
  eval->add_option("--scores", scores_path, "'node score' file, for the inversion error");
  add_out(eval);
  eval->callback([&] {
    const bs::AssignmentDocument est = bs::read_assignment_json(estimate_doc);
    bs::IdMap ids;
    for (const auto& [name, label] : est.labels) ids.intern(name);
    std::optional<bs::ParsedGraph> pg;
    if (!graph_path.empty()) {
      GraphInput gi;
      gi.path = graph_path;
      gi.string_ids = true;
      pg = gi.load();
      ids = pg->ids;
    }
    const bs::Labels e = est.labels_for(ids);
    json doc;
    if (!truth_doc.empty()) {
      const bs::AssignmentDocument tr = bs::read_assignment_json(truth_doc);
      const bs::Labels t = tr.labels_for(ids);
      const double m = bs::nmi(t, e);
      doc["error"] = bs::block_membership_error(t, e, std::max(tr.k, est.k));
      doc["nmi"] = m;
      doc["one_minus_nmi"] = 1.0 - m;
    }
    if (pg) doc["acyclicity"] = bs::acyclicity_score(pg->graph, e);
    if (!scores_path.empty()) doc["inversion_error"] = bs::inversion_error(e, read_scores(scores_path, ids));
    if (doc.is_null()) bs::fail(bs::ErrorKind::InvalidArgument, "evaluate needs --truth, --input or --scores");
    emit(out_path, doc.dump(2) + "\n");
  });

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "Largest-modulus eigenvalues of a transition operator as CSV");
  GraphInput spec_in;
  spec_in.attach(spec);
  std::string op_kind = "P";
  bool dense = false;
  spec->add_option("--k", k, "Number of eigenpairs (ignored with --dense)");
  spec->add_option("--operator", op_kind, "P (row-stochastic) or Pa (uniform dangling rows)")->check(CLI::IsMember({"P", "Pa"}));
  spec->add_flag("--dense", dense, "Full dense spectrum");
  spec->add_option("--dense-cap", dense_cap, "Largest n for the dense solver");
  spec->add_option("--tol", tol, "Eigensolver tolerance")->check(CLI::PositiveNumber);
  spec->add_option("--seed", seed, "Random seed");
  spec->add_option("--max-restarts", max_restarts, "Eigensolver restart budget")->check(CLI::PositiveNumber);
  add_out(spec);
  spec->callback([&] {
    const bs::ParsedGraph pg = spec_in.load();
    const bs::TransitionOperator op = op_kind == "Pa" ? bs::transition_Pa(pg.graph) : bs::transition_P(pg.graph);
    bs::SpectrumResult s;
    if (dense) {
      s = bs::dense_spectrum(op, dense_cap);
    } else {
      if (k == 0) bs::fail(bs::ErrorKind::InvalidArgument, "spectrum needs --k or --dense");
      s = bs::top_modulus_eigenpairs(op, k, tol, max_restarts, seed);
      if (!s.converged) std::cerr << "warning: eigensolver did not converge\n";
    }
    std::ostringstream ss;
    bs::emit_spectrum_csv(ss, s);
    emit(out_path, ss.str());
  });

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Synthetic benchmark over a perturbation grid, as CSV run records");
  bs::BenchmarkConfig cfg;
  std::string eps_list = "0", alg_list = "bcs";
  bool record_timing = false;
  bench->add_option("--family", family, "cycle, acyclic, twin-cycle, twin-acyclic")
      ->check(CLI::IsMember({"cycle", "acyclic", "twin-cycle", "twin-acyclic"}));
  bench->add_option("--n", cfg.n, "Total node count");
  bench->add_option("--k", cfg.k, "Number of blocks");
  bench->add_option("--p", cfg.p, "Structural edge probability (default 0.7 cyclic, 0.5 acyclic)");
  bench->add_option("--epsilons", eps_list, "Comma-separated perturbation grid");
  bench->add_option("--alpha", cfg.alpha, "Cross-edge factor for twin families")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--seeds", cfg.seeds, "Trials per grid point");
  bench->add_option("--seed", cfg.base_seed, "Base seed");
  bench->add_option("--algorithms", alg_list, "Comma-separated: bcs, bas, bib, svd");
  bench->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
  bench->add_flag("--record-timing", record_timing, "Fill runtime_ms (output is then not reproducible byte for byte)");
  bench->add_flag("--uniform-rho", uniform, "Uniform block distribution even when k = 8");
  bench->add_option("--tol", tol, "Eigensolver tolerance")->check(CLI::PositiveNumber);
  bench->add_option("--filter", filter, "Eigenvector filter: posimag or all (default: posimag for bcs, all for bas)")->check(CLI::IsMember({"all", "posimag"}));
  bench->add_option("--restarts", restarts, "k-means restarts")->check(CLI::PositiveNumber);
  add_out(bench);
  bench->callback([&] {
    cfg.family = bs::parse_family(family);
    cfg.epsilons = split_doubles(eps_list);
    cfg.algorithms = split_words(alg_list);
    cfg.record_timing = record_timing;
    cfg.benchmark_rho = !uniform;
    cfg.spectral.tol = tol;
    cfg.spectral.filter = parse_filter(filter);
    cfg.spectral.restarts = restarts;
    std::ostringstream ss;
    bs::write_run_records(ss, bs::run_benchmark(cfg));
    emit(out_path, ss.str());
  });

  // baselines
  auto* base = app.add_subcommand("baselines", "Bibliometric (bib) or adjacency-SVD (svd) clustering");
  GraphInput base_in;
  base_in.attach(base);
  std::string method = "bib";
  double bib_alpha = 0.5;
  std::size_t d = 0;
  base->add_option("--method", method, "bib or svd")->check(CLI::IsMember({"bib", "svd"}));
  base->add_option("--k", k, "Number of blocks")->required();
  base->add_option("--alpha", bib_alpha, "Co-coupling weight of the bibliometric matrix")->check(CLI::Range(0.0, 1.0));
  base->add_option("--d", d, "SVD embedding dimension (default k)");
  base->add_option("--seed", seed, "Random seed");
  base->add_option("--restarts", restarts, "k-means restarts")->check(CLI::PositiveNumber);
  base->add_option("--dense-cap", dense_cap, "Largest n for dense solves");
  add_format(base, format, {"json", "csv"});
  add_out(base);
  base->callback([&] {
    const bs::ParsedGraph pg = base_in.load();
    bs::BaselineOptions bo;
    bo.seed = seed;
    bo.restarts = restarts;
    bo.dense_cap = dense_cap;
    const bs::BlockAssignment a = method == "svd" ? bs::svd_cluster(pg.graph, d ? d : k, k, bo)
                                                  : bs::bib_cluster(pg.graph, k, bib_alpha, bo);
    emit(out_path, assignment_text(a, pg.ids, format, std::nullopt));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 64;
  } catch (const bs::Error& e) {
    std::cerr << "error: " << bs::to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 70;
  }
  return 0;
}
