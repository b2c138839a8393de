#include <sstream>
#include <string>

#include "doctest.h"
#include "uavmag/bench.hpp"
#include "uavmag/pipeline.hpp"

using namespace uavmag;

namespace {

std::string dump(const BenchmarkResult& r) {
  const FileProvenance prov{"test", "hash", r.seeds};
  std::ostringstream os;
  write_results_csv(os, r, prov);
  write_summary_json(os, r, prov);
  write_table1(os, r, prov);
  if (!r.sweep.empty()) write_altitude_sweep_csv(os, r, prov);
  return os.str();
}

}  // namespace

TEST_CASE("method combos") {
  const auto c = default_combos(0.7, 50.0);
  REQUIRE(c.size() == 4);
  CHECK(c[0].name() == "WAIC-UP/RUDE");
  CHECK(c[1].name() == "WAIC-UP/Threshold");
  CHECK(c[2].name() == "Low-pass/RUDE");
  CHECK(c[3].name() == "Low-pass/Threshold");
  CHECK(c[1].detector_param == 50.0);
}

TEST_CASE("mine count draws stay in range and vary") {
  int seen[7] = {};
  for (std::uint64_t s = 0; s < 400; ++s) {
    const int k = draw_mine_count(s, 3, 6);
    REQUIRE(k >= 3);
    REQUIRE(k <= 6);
    ++seen[k];
  }
  for (int k = 3; k <= 6; ++k) CHECK(seen[k] > 50);
}

TEST_CASE("benchmark 1 is deterministic and worker independent") {
  Benchmark1Config cfg;
  cfg.n_sims = 2;
  cfg.base_seed = 300;
  const auto serial = run_benchmark1(cfg);
  REQUIRE(serial.rows.size() == 8);
  CHECK(serial.seeds == std::vector<std::uint64_t>{300, 301});

  // Pooled counts are the sum of the rows.
  for (const auto& pooled : serial.pooled) {
    ConfusionCounts sum;
    for (const auto& r : serial.rows)
      if (r.combo == pooled.name) sum += r.counts;
    CHECK(sum == pooled.counts);
  }
  // Each row's mine count matches the seeded draw.
  for (const auto& r : serial.rows) CHECK(r.n_mines == static_cast<std::size_t>(draw_mine_count(r.seed, 3, 6)));

  cfg.workers = 3;
  const auto threaded = run_benchmark1(cfg);
  CHECK(dump(serial) == dump(threaded));
  cfg.workers = 1;
  CHECK(dump(run_benchmark1(cfg)) == dump(serial));
}

TEST_CASE("benchmark 2 reuses the seed list at every altitude") {
  Benchmark2Config cfg;
  cfg.altitudes = {0.5, 2.5};
  cfg.sims_per_altitude = 1;
  cfg.base_seed = 40;
  const auto r = run_benchmark2(cfg);
  REQUIRE(r.rows.size() == 8);
  CHECK(r.rows[0].seed == r.rows[4].seed);
  CHECK(r.rows[0].altitude == 0.5);
  CHECK(r.rows[4].altitude == 2.5);
  REQUIRE(r.sweep.size() == 8);
  // Mines at 0.5 m are found by WAIC-UP/Threshold; at 2.5 m they fall below 25 nT.
  CHECK(r.rows[1].counts.tp == 4);
  CHECK(r.rows[5].counts.tp == 0);
  const std::string text = dump(r);
  CHECK(text.find("altitude,method,FP,TP,FN") != std::string::npos);
}

TEST_CASE("failed simulation names its seed") {
  Benchmark1Config cfg;
  cfg.n_sims = 3;
  cfg.base_seed = 90;
  cfg.scenario.grid_size = 2.5;  // cannot hold three mines 2 m apart
  cfg.scenario.max_placement_attempts = 20;
  try {
    run_benchmark1(cfg);
    FAIL("expected a simulation error");
  } catch (const SimulationError& e) {
    CHECK(e.seed() == 90);
    CHECK(std::string(e.what()).find("90") != std::string::npos);
  }
}
