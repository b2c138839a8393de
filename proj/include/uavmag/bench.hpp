#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavmag/metrics.hpp"
#include "uavmag/pipeline.hpp"
#include "uavmag/survey_io.hpp"

namespace uavmag {

struct Benchmark1Config {
  int n_sims = 50;
  std::uint64_t base_seed = 1000;
  int min_mines = 3;
  int max_mines = 6;
  double rude_threshold = 0.7;
  double hard_threshold = 50.0;  // nT
  int workers = 1;
  ScenarioParams scenario;
  PipelineOptions pipeline;
};

struct Benchmark2Config {
  std::vector<double> altitudes = default_altitudes();
  int sims_per_altitude = 5;
  std::uint64_t base_seed = 2000;
  double rude_threshold = 0.7;
  double hard_threshold = 25.0;  // nT
  int workers = 1;
  ScenarioParams scenario;
  PipelineOptions pipeline;

  /// 0.5 m to 3.0 m in 0.25 m steps.
  static std::vector<double> default_altitudes();
};

struct SimulationRow {
  std::uint64_t seed = 0;
  double altitude = 0.0;
  std::size_t n_mines = 0;
  std::string combo;
  ConfusionCounts counts;
  MetricValue rho;
  std::vector<double> errors;
  std::size_t n_clusters = 0;
};

struct AltitudePoint {
  double altitude = 0.0;
  MetricsReport report;
};

struct BenchmarkResult {
  std::vector<SimulationRow> rows;      // simulation-major, combos in order
  std::vector<MetricsReport> pooled;    // one per combo
  std::vector<AltitudePoint> sweep;     // benchmark 2 only: altitude-major
  std::vector<std::uint64_t> seeds;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::uint64_t seed, const std::string& what)
      : std::runtime_error("simulation with seed " + std::to_string(seed) + " failed: " + what), seed_(seed) {}
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Mine count for a Benchmark-1 seed, uniform on [lo, hi].
int draw_mine_count(std::uint64_t seed, int lo, int hi);

BenchmarkResult run_benchmark1(const Benchmark1Config& config);
BenchmarkResult run_benchmark2(const Benchmark2Config& config);

/// Pools rows of one combo (optionally one altitude) into a report.
MetricsReport pool_rows(const std::vector<SimulationRow>& rows, const std::string& combo, const double* altitude);

void write_results_csv(std::ostream& out, const BenchmarkResult& result, const FileProvenance& provenance);
void write_summary_json(std::ostream& out, const BenchmarkResult& result, const FileProvenance& provenance);
void write_table1(std::ostream& out, const BenchmarkResult& result, const FileProvenance& provenance);
void write_altitude_sweep_csv(std::ostream& out, const BenchmarkResult& result, const FileProvenance& provenance);

}  // namespace uavmag
