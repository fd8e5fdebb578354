#include "blockspec/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "blockspec/baselines.hpp"
#include "blockspec/error.hpp"
#include "blockspec/io.hpp"
#include "blockspec/metrics.hpp"

#ifndef BLOCKSPEC_VERSION
#define BLOCKSPEC_VERSION "0.0.0"
#endif

namespace blockspec {

std::string_view library_version() { return BLOCKSPEC_VERSION; }

namespace {

constexpr std::size_t kColumns = 14;

std::string clean_field(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::size_t parse_size(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) fail(ErrorKind::Parse, "run record: bad integer '" + s + "'");
  return static_cast<std::size_t>(v);
}

bool cyclic(Family f) { return f == Family::Cycle || f == Family::TwinCycle; }
bool twin(Family f) { return f == Family::TwinCycle || f == Family::TwinAcyclic; }

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::uint64_t trial_seed(const BenchmarkConfig& c, std::size_t trial) { return derive_seed(c.base_seed, trial); }

BlockAssignment run_algorithm(const std::string& name, const BenchmarkConfig& c, const LabeledGraph& inst,
                              std::uint64_t seed) {
  SpectralOptions so = c.spectral;
  so.seed = seed;
  BaselineOptions bo;
  bo.seed = seed;
  bo.restarts = so.restarts;
  bo.kmeans_max_iter = so.kmeans_max_iter;
  if (name == "bcs") return bcs(inst.graph, c.k, so);
  if (name == "bas") return bas(inst.graph, c.k, so);
  if (name == "bib") return bib_cluster(inst.graph, c.k, c.bib_alpha, bo);
  // A block-cycle P has rank k, a block-acyclic one k - 1 (the last block is a sink).
  if (name == "svd") return svd_cluster(inst.graph, cyclic(c.family) ? c.k : c.k - 1, c.k, bo);
  fail(ErrorKind::InvalidArgument, "unknown algorithm '" + name + "' (bcs, bas, bib, svd)");
}

}  // namespace

std::string run_record_header() {
  return "command,family,algorithm,n,k,epsilon,alpha,seed,error,one_minus_nmi,acyclicity,runtime_ms,version,status";
}

std::string to_csv_row(const RunRecord& r) {
  std::ostringstream ss;
  ss << clean_field(r.command) << ',' << clean_field(r.family) << ',' << clean_field(r.algorithm) << ',' << r.n << ','
     << r.k << ',' << format_double(r.epsilon) << ',' << format_double(r.alpha) << ',' << clean_field(r.seed) << ','
     << format_double(r.error) << ',' << format_double(r.one_minus_nmi) << ',' << format_double(r.acyclicity) << ','
     << format_double(r.runtime_ms) << ',' << clean_field(r.version) << ',' << clean_field(r.status);
  return ss.str();
}

RunRecord parse_run_record(const std::string& line) {
  std::vector<std::string> f;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    f.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (f.size() != kColumns) {
    fail(ErrorKind::Parse, "run record has " + std::to_string(f.size()) + " fields, expected " + std::to_string(kColumns));
  }
  RunRecord r;
  r.command = f[0];
  r.family = f[1];
  r.algorithm = f[2];
  r.n = parse_size(f[3]);
  r.k = parse_size(f[4]);
  r.epsilon = parse_double(f[5]);
  r.alpha = parse_double(f[6]);
  r.seed = f[7];
  r.error = parse_double(f[8]);
  r.one_minus_nmi = parse_double(f[9]);
  r.acyclicity = parse_double(f[10]);
  r.runtime_ms = parse_double(f[11]);
  r.version = f[12];
  r.status = f[13];
  return r;
}

void write_run_records(std::ostream& out, const std::vector<RunRecord>& records) {
  out << run_record_header() << '\n';
  for (const RunRecord& r : records) out << to_csv_row(r) << '\n';
}

std::vector<RunRecord> read_run_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != run_record_header()) fail(ErrorKind::Parse, "run records: missing header");
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_run_record(line));
  }
  return out;
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Cycle: return "cycle";
    case Family::Acyclic: return "acyclic";
    case Family::TwinCycle: return "twin-cycle";
    case Family::TwinAcyclic: return "twin-acyclic";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  for (Family f : {Family::Cycle, Family::Acyclic, Family::TwinCycle, Family::TwinAcyclic}) {
    if (to_string(f) == text) return f;
  }
  fail(ErrorKind::InvalidArgument, "unknown family '" + std::string(text) + "' (cycle, acyclic, twin-cycle, twin-acyclic)");
}

LabeledGraph benchmark_instance(const BenchmarkConfig& c, double epsilon, std::size_t trial) {
  const std::uint64_t seed = trial_seed(c, trial);
  std::vector<double> rho = c.benchmark_rho && c.k == kBenchmarkRhoRaw.size() ? benchmark_rho() : uniform_rho(c.k);
  const double p = c.p >= 0.0 ? c.p : (cyclic(c.family) ? 0.7 : 0.5);
  const SbmParams params = cyclic(c.family) ? cycle_params(c.k, p, rho) : acyclic_params(c.k, p, rho);

  LabeledGraph base;
  if (twin(c.family)) {
    if (c.n % 2 != 0) fail(ErrorKind::InvalidArgument, "twin families need an even total node count");
    base = combine_twin_sbm(params, c.n / 2, c.alpha, derive_seed(seed, 0));
  } else {
    base = sample_sbm(params, c.n, derive_seed(seed, 0));
  }
  // The same base graph is reused across the epsilon grid for a given trial.
  if (epsilon <= 0.0) return base;
  const SbmParams noise = perturbation_params(c.k, epsilon, derive_seed(seed, 1), std::move(rho));
  return union_perturb(base, noise, derive_seed(seed, 2));
}

std::vector<RunRecord> run_benchmark(const BenchmarkConfig& c) {
  if (c.epsilons.empty() || c.seeds == 0 || c.algorithms.empty()) {
    fail(ErrorKind::InvalidArgument, "benchmark needs at least one epsilon, seed and algorithm");
  }
  for (const auto& a : c.algorithms) {
    if (a != "bcs" && a != "bas" && a != "bib" && a != "svd") {
      fail(ErrorKind::InvalidArgument, "unknown algorithm '" + a + "' (bcs, bas, bib, svd)");
    }
  }
  const std::size_t cells = c.epsilons.size() * c.seeds;
  const std::size_t algs = c.algorithms.size();
  std::vector<RunRecord> trials(cells * algs);

  auto run_cell = [&](std::size_t cell) {
    const std::size_t ei = cell / c.seeds, trial = cell % c.seeds;
    const double eps = c.epsilons[ei];
    const std::uint64_t seed = trial_seed(c, trial);
    RunRecord proto;
    proto.family = std::string(to_string(c.family));
    proto.n = c.n;
    proto.k = c.k;
    proto.epsilon = eps;
    proto.alpha = twin(c.family) ? c.alpha : 0.0;
    proto.seed = std::to_string(seed);
    proto.version = std::string(library_version());
    for (std::size_t ai = 0; ai < algs; ++ai) {
      RunRecord& r = trials[cell * algs + ai];
      r = proto;
      r.algorithm = c.algorithms[ai];
    }
    LabeledGraph inst;
    try {
      inst = benchmark_instance(c, eps, trial);
    } catch (const std::exception& e) {
      for (std::size_t ai = 0; ai < algs; ++ai) {
        RunRecord& r = trials[cell * algs + ai];
        r.error = r.one_minus_nmi = r.acyclicity = std::numeric_limits<double>::quiet_NaN();
        r.status = std::string("failed:") + e.what();
      }
      return;
    }
    for (std::size_t ai = 0; ai < algs; ++ai) {
      RunRecord& r = trials[cell * algs + ai];
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const BlockAssignment a = run_algorithm(r.algorithm, c, inst, seed);
        const auto t1 = std::chrono::steady_clock::now();
        if (c.record_timing) r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        r.error = block_membership_error(inst.tau, a.labels, c.k);
        r.one_minus_nmi = 1.0 - nmi(inst.tau, a.labels);
        r.acyclicity = acyclicity_score(inst.graph, rank_blocks(inst.graph, a).labels);
      } catch (const std::exception& e) {
        r.error = r.one_minus_nmi = r.acyclicity = std::numeric_limits<double>::quiet_NaN();
        r.status = std::string("failed:") + e.what();
      }
    }
  };

  std::size_t threads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cells);
  if (threads <= 1) {
    for (std::size_t cell = 0; cell < cells; ++cell) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t cell = next++; cell < cells; cell = next++) run_cell(cell);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<RunRecord> out = trials;
  for (std::size_t ei = 0; ei < c.epsilons.size(); ++ei) {
    for (std::size_t ai = 0; ai < algs; ++ai) {
      std::vector<double> err, nmi_err, ca, ms;
      for (std::size_t trial = 0; trial < c.seeds; ++trial) {
        const RunRecord& r = trials[(ei * c.seeds + trial) * algs + ai];
        if (r.status != "ok") continue;
        err.push_back(r.error);
        nmi_err.push_back(r.one_minus_nmi);
        ca.push_back(r.acyclicity);
        ms.push_back(r.runtime_ms);
      }
      RunRecord agg = trials[ei * c.seeds * algs + ai];
      agg.seed = "median";
      agg.status = "aggregate";
      agg.error = median(err);
      agg.one_minus_nmi = median(nmi_err);
      agg.acyclicity = median(ca);
      agg.runtime_ms = ms.empty() ? 0.0 : median(ms);
      out.push_back(agg);
    }
  }
  return out;
}

}  // namespace blockspec
