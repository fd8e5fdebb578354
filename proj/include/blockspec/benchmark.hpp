#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "blockspec/blockalgo.hpp"
#include "blockspec/synth.hpp"

namespace blockspec {

std::string_view library_version();

/// One row of benchmark output.
struct RunRecord {
  std::string command = "benchmark";
  std::string family;
  std::string algorithm;
  std::size_t n = 0;
  std::size_t k = 0;
  double epsilon = 0.0;
  double alpha = 0.0;
  std::string seed;  // trial seed, or "median" for aggregate rows
  double error = 0.0;
  double one_minus_nmi = 0.0;
  double acyclicity = 0.0;
  double runtime_ms = 0.0;
  std::string version;
  std::string status = "ok";  // ok | aggregate | failed:<reason>
};

std::string run_record_header();
std::string to_csv_row(const RunRecord& r);
RunRecord parse_run_record(const std::string& line);
void write_run_records(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_run_records(std::istream& in);

enum class Family { Cycle, Acyclic, TwinCycle, TwinAcyclic };

std::string_view to_string(Family family);
Family parse_family(std::string_view text);

struct BenchmarkConfig {
  Family family = Family::Cycle;
  std::size_t n = 1000;  // total nodes (twin families split it in two)
  std::size_t k = 8;
  /// Within-structure edge probability; negative selects 0.7 (cyclic) / 0.5 (acyclic).
  double p = -1.0;
  std::vector<double> epsilons{0.0};
  double alpha = 0.1;
  std::size_t seeds = 5;
  std::uint64_t base_seed = 0;
  std::vector<std::string> algorithms{"bcs"};
  /// Benchmark block distribution when k == 8, otherwise uniform.
  bool benchmark_rho = true;
  bool record_timing = false;
  std::size_t threads = 0;  // 0: hardware concurrency
  SpectralOptions spectral{};
  double bib_alpha = 0.5;
};

/// Graph of one (epsilon, trial) cell, exactly as the benchmark builds it.
LabeledGraph benchmark_instance(const BenchmarkConfig& config, double epsilon, std::size_t trial);

/// One record per (epsilon, trial, algorithm), then one median row per
/// (epsilon, algorithm).
std::vector<RunRecord> run_benchmark(const BenchmarkConfig& config);

}  // namespace blockspec
