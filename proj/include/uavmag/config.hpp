#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "uavmag/bench.hpp"

namespace uavmag {

/// Settings shared by every subcommand. Scenario and pipeline knobs apply to
/// simulate/clean/detect and are copied into both benchmark configs.
struct RunConfig {
  std::uint64_t seed = 42;
  int n_mines = 4;
  int workers = 1;
  ScenarioParams scenario;
  PipelineOptions pipeline;
  Benchmark1Config bench1;
  Benchmark2Config bench2;
};

/// Bad key, type or value. The message names the offending key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses YAML text. Missing keys keep defaults; unknown keys are errors.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);

/// Canonical JSON echo of every effective setting.
nlohmann::json config_to_json(const RunConfig& config);

/// FNV-1a (64-bit, hex) of the canonical JSON echo.
std::string config_hash(const RunConfig& config);

/// Copies the shared scenario, pipeline and worker settings into the bench configs.
void propagate_shared(RunConfig& config);

}  // namespace uavmag
