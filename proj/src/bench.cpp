#include "uavmag/bench.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "uavmag/rng.hpp"

namespace uavmag {

namespace {

constexpr std::uint64_t kStreamMineCount = 4;

// Runs job(i) for i in [0, n) on up to `workers` threads. Results are stored
// by index by the job itself; the first failure (lowest index) is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& job) {
  const std::size_t threads = std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers))));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<SimulationRow> simulate_and_score(const Scenario& scenario, double altitude,
                                              std::span<const MethodCombo> combos, const PipelineOptions& options) {
  const auto record = simulate(scenario);
  const auto outcomes = run_pipeline(scenario, record, combos, options);
  std::vector<SimulationRow> rows;
  for (const auto& o : outcomes) {
    SimulationRow r;
    r.seed = scenario.seed;
    r.altitude = altitude;
    r.n_mines = scenario.mines.size();
    r.combo = o.combo.name();
    r.counts = o.score.counts;
    r.rho = o.rho;
    r.errors = o.score.errors;
    r.n_clusters = o.clusters.size();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string join_errors(const std::vector<double>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ';';
    s += format_double(e[i]);
  }
  return s;
}

}  // namespace

std::vector<double> Benchmark2Config::default_altitudes() {
  std::vector<double> a;
  for (int k = 0; k <= 10; ++k) a.push_back(0.5 + 0.25 * k);
  return a;
}

int draw_mine_count(std::uint64_t seed, int lo, int hi) {
  Rng rng(mix_seed(seed, kStreamMineCount));
  return static_cast<int>(rng.uniform_int(lo, hi));
}

MetricsReport pool_rows(const std::vector<SimulationRow>& rows, const std::string& combo, const double* altitude) {
  ConfusionCounts pooled;
  std::vector<double> rhos;
  std::vector<double> errors;
  for (const auto& r : rows) {
    if (r.combo != combo || (altitude && r.altitude != *altitude)) continue;
    pooled += r.counts;
    rhos.push_back(r.rho.value);
    errors.insert(errors.end(), r.errors.begin(), r.errors.end());
  }
  return make_report(combo, pooled, rhos, std::move(errors));
}

BenchmarkResult run_benchmark1(const Benchmark1Config& config) {
  if (config.n_sims < 1) throw std::invalid_argument("n_sims must be >= 1");
  if (config.min_mines < 0 || config.max_mines < config.min_mines)
    throw std::invalid_argument("mine count range must satisfy 0 <= min_mines <= max_mines");
  config.scenario.validate();
  const auto combos = default_combos(config.rude_threshold, config.hard_threshold);
  const auto n = static_cast<std::size_t>(config.n_sims);
  std::vector<std::vector<SimulationRow>> per_sim(n);
  parallel_for(n, config.workers, [&](std::size_t i) {
    const std::uint64_t seed = config.base_seed + i;
    try {
      const int n_mines = draw_mine_count(seed, config.min_mines, config.max_mines);
      const auto scenario = generate_random_scenario(seed, n_mines, config.scenario);
      per_sim[i] = simulate_and_score(scenario, config.scenario.altitude, combos, config.pipeline);
    } catch (const std::exception& e) {
      throw SimulationError(seed, e.what());
    }
  });
  BenchmarkResult result;
  for (std::size_t i = 0; i < n; ++i) {
    result.seeds.push_back(config.base_seed + i);
    for (auto& r : per_sim[i]) result.rows.push_back(std::move(r));
  }
  for (const auto& c : combos) result.pooled.push_back(pool_rows(result.rows, c.name(), nullptr));
  return result;
}

BenchmarkResult run_benchmark2(const Benchmark2Config& config) {
  if (config.altitudes.empty()) throw std::invalid_argument("altitudes must be non-empty");
  if (config.sims_per_altitude < 1) throw std::invalid_argument("sims_per_altitude must be >= 1");
  for (const double a : config.altitudes)
    if (!(a > 0.0)) throw std::invalid_argument("altitudes must be positive");
  config.scenario.validate();
  const auto combos = default_combos(config.rude_threshold, config.hard_threshold);
  const auto per_alt = static_cast<std::size_t>(config.sims_per_altitude);
  const std::size_t n = config.altitudes.size() * per_alt;
  std::vector<std::vector<SimulationRow>> per_sim(n);
  parallel_for(n, config.workers, [&](std::size_t k) {
    const double altitude = config.altitudes[k / per_alt];
    const std::uint64_t seed = config.base_seed + k % per_alt;
    try {
      const auto scenario = fixed_corner_scenario(seed, altitude, config.scenario);
      per_sim[k] = simulate_and_score(scenario, altitude, combos, config.pipeline);
    } catch (const std::exception& e) {
      throw SimulationError(seed, e.what());
    }
  });
  BenchmarkResult result;
  for (std::size_t i = 0; i < per_alt; ++i) result.seeds.push_back(config.base_seed + i);
  for (auto& rows : per_sim)
    for (auto& r : rows) result.rows.push_back(std::move(r));
  for (const auto& c : combos) result.pooled.push_back(pool_rows(result.rows, c.name(), nullptr));
  for (const double a : config.altitudes)
    for (const auto& c : combos) result.sweep.push_back({a, pool_rows(result.rows, c.name(), &a)});
  return result;
}

void write_results_csv(std::ostream& out, const BenchmarkResult& result, const FileProvenance& provenance) {
  out << provenance.header_line() << '\n';
  out << "seed,altitude,n_mines,combo,tp,fp,fn,n_clusters,rho,rho_degenerate,errors_m\n";
  for (const auto& r : result.rows) {
    out << r.seed << ',' << format_double(r.altitude) << ',' << r.n_mines << ',' << r.combo << ',' << r.counts.tp
        << ',' << r.counts.fp << ',' << r.counts.fn << ',' << r.n_clusters << ',' << format_double(r.rho.value)
        << ',' << (r.rho.degenerate ? 1 : 0) << ',' << join_errors(r.errors) << '\n';
  }
}

void write_summary_json(std::ostream& out, const BenchmarkResult& result, const FileProvenance& provenance) {
  nlohmann::json j;
  j["provenance"] = {{"tool", "uavmag"},
                     {"version", provenance.tool_version},
                     {"config_hash", provenance.config_hash},
                     {"seeds", provenance.seeds}};
  j["combos"] = nlohmann::json::array();
  for (const auto& r : result.pooled) j["combos"].push_back(to_json(r));
  if (!result.sweep.empty()) {
    j["altitude_sweep"] = nlohmann::json::array();
    for (const auto& p : result.sweep) {
      auto row = to_json(p.report);
      row["altitude_m"] = p.altitude;
      j["altitude_sweep"].push_back(row);
    }
  }
  out << j.dump(2) << '\n';
}

void write_table1(std::ostream& out, const BenchmarkResult& result, const FileProvenance& provenance) {
  out << provenance.header_line() << '\n';
  write_table1_csv(out, result.pooled);
}

void write_altitude_sweep_csv(std::ostream& out, const BenchmarkResult& result, const FileProvenance& provenance) {
  out << provenance.header_line() << '\n';
  out << "altitude,method,FP,TP,FN,Precision,Recall,F1,Threat,rho,median_error_m\n";
  for (const auto& p : result.sweep) {
    const auto& r = p.report;
    const double med = r.median_error();
    out << format_double(p.altitude) << ',' << r.name << ',' << r.counts.fp << ',' << r.counts.tp << ','
        << r.counts.fn << ',' << format_double(r.precision.value) << ',' << format_double(r.recall.value) << ','
        << format_double(r.f1.value) << ',' << format_double(r.threat_score.value) << ','
        << format_double(r.pearson_rho) << ',' << (std::isnan(med) ? std::string() : format_double(med)) << '\n';
  }
}

}  // namespace uavmag
