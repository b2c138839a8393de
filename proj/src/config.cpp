#include "uavmag/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace uavmag {

namespace {

// Reads the children of one mapping node, rejecting keys without a handler.
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(where("") + ": expected a mapping");
  }

  template <typename T>
  Section& get(const std::string& key, T& out) {
    handled_[key] = true;
    if (!node_ || !node_.IsMap()) return *this;
    const auto v = node_[key];
    if (!v) return *this;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(key) + ": wrong type");
    }
    return *this;
  }

  Section child(const std::string& key) {
    handled_[key] = true;
    const YAML::Node sub = (node_ && node_.IsMap()) ? node_[key] : YAML::Node();
    return Section(sub, path_.empty() ? key : path_ + "." + key);
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!handled_.count(key)) throw ConfigError(where(key) + ": unknown key");
    }
  }

  [[nodiscard]] std::string where(const std::string& key) const {
    if (path_.empty()) return key;
    return key.empty() ? path_ : path_ + "." + key;
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::map<std::string, bool> handled_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

void read_scenario(Section s, ScenarioParams& p) {
  s.get("grid_size", p.grid_size)
      .get("n_lines", p.n_lines)
      .get("altitude", p.altitude)
      .get("speed", p.speed)
      .get("sample_rate", p.sample_rate)
      .get("noise_sigma", p.noise_sigma)
      .get("background_magnitude", p.background_magnitude)
      .get("background_inclination_deg", p.background_inclination_deg)
      .get("min_separation", p.min_separation)
      .get("max_depth", p.max_depth)
      .get("motor_side", p.motor_side)
      .get("sensor_spacing", p.sensor_spacing)
      .get("min_chirp", p.min_chirp)
      .get("max_chirp", p.max_chirp)
      .get("min_motor_moment", p.min_motor_moment)
      .get("max_motor_moment", p.max_motor_moment)
      .get("max_placement_attempts", p.max_placement_attempts);
  s.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("scenario." + std::string(e.what()));
  }
}

void read_pipeline(Section s, PipelineOptions& p) {
  std::vector<std::size_t> windows = p.rude.window_lengths;
  std::size_t min_cluster = p.hdbscan.min_cluster_size;
  std::string rule = p.match_rule == MatchRule::PerMine ? "per_mine" : "per_cluster";
  s.get("lowpass_cutoff", p.lowpass_cutoff)
      .get("lowpass_order", p.lowpass_order)
      .get("rude_windows", windows)
      .get("rude_nu", p.rude.nu)
      .get("min_cluster_size", min_cluster)
      .get("cluster_selection_epsilon", p.hdbscan.cluster_selection_epsilon)
      .get("allow_single_cluster", p.hdbscan.allow_single_cluster)
      .get("match_radius", p.match_radius)
      .get("match_rule", rule);
  s.finish();
  require(p.lowpass_cutoff > 0.0, "pipeline.lowpass_cutoff", "must be positive");
  require(p.lowpass_order >= 1, "pipeline.lowpass_order", "must be >= 1");
  require(!windows.empty(), "pipeline.rude_windows", "must be non-empty");
  for (const auto w : windows) require(w >= 2, "pipeline.rude_windows", "entries must be >= 2");
  require(p.rude.nu > 0.0 && p.rude.nu <= 1.0, "pipeline.rude_nu", "must lie in (0, 1]");
  require(min_cluster >= 2, "pipeline.min_cluster_size", "must be >= 2");
  require(p.hdbscan.cluster_selection_epsilon >= 0.0, "pipeline.cluster_selection_epsilon", "must be >= 0");
  require(p.match_radius > 0.0, "pipeline.match_radius", "must be positive");
  require(rule == "per_mine" || rule == "per_cluster", "pipeline.match_rule", "must be per_mine or per_cluster");
  p.rude.window_lengths = windows;
  p.hdbscan.min_cluster_size = min_cluster;
  p.match_rule = rule == "per_mine" ? MatchRule::PerMine : MatchRule::PerCluster;
}

void read_bench1(Section s, Benchmark1Config& b) {
  s.get("n_sims", b.n_sims)
      .get("base_seed", b.base_seed)
      .get("min_mines", b.min_mines)
      .get("max_mines", b.max_mines)
      .get("rude_threshold", b.rude_threshold)
      .get("hard_threshold", b.hard_threshold);
  s.finish();
  require(b.n_sims >= 1, "bench1.n_sims", "must be >= 1");
  require(b.min_mines >= 0, "bench1.min_mines", "must be >= 0");
  require(b.max_mines >= b.min_mines, "bench1.max_mines", "must be >= min_mines");
  require(b.rude_threshold > 0.0 && b.rude_threshold <= 1.0, "bench1.rude_threshold", "must lie in (0, 1]");
  require(b.hard_threshold > 0.0, "bench1.hard_threshold", "must be positive");
}

void read_bench2(Section s, Benchmark2Config& b) {
  s.get("altitudes", b.altitudes)
      .get("sims_per_altitude", b.sims_per_altitude)
      .get("base_seed", b.base_seed)
      .get("rude_threshold", b.rude_threshold)
      .get("hard_threshold", b.hard_threshold);
  s.finish();
  require(!b.altitudes.empty(), "bench2.altitudes", "must be non-empty");
  for (const double a : b.altitudes) require(a > 0.0 && std::isfinite(a), "bench2.altitudes", "must be positive");
  require(b.sims_per_altitude >= 1, "bench2.sims_per_altitude", "must be >= 1");
  require(b.rude_threshold > 0.0 && b.rude_threshold <= 1.0, "bench2.rude_threshold", "must lie in (0, 1]");
  require(b.hard_threshold > 0.0, "bench2.hard_threshold", "must be positive");
}

}  // namespace

void propagate_shared(RunConfig& c) {
  c.bench1.scenario = c.scenario;
  c.bench2.scenario = c.scenario;
  c.bench1.pipeline = c.pipeline;
  c.bench2.pipeline = c.pipeline;
  c.bench1.workers = c.workers;
  c.bench2.workers = c.workers;
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML parse error: ") + e.what());
  }
  RunConfig c;
  Section top(root, "");
  top.get("seed", c.seed).get("n_mines", c.n_mines).get("workers", c.workers);
  read_scenario(top.child("scenario"), c.scenario);
  read_pipeline(top.child("pipeline"), c.pipeline);
  read_bench1(top.child("bench1"), c.bench1);
  read_bench2(top.child("bench2"), c.bench2);
  top.finish();
  require(c.n_mines >= 0, "n_mines", "must be >= 0");
  require(c.workers >= 1, "workers", "must be >= 1");
  propagate_shared(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json config_to_json(const RunConfig& c) {
  const auto& s = c.scenario;
  const auto& p = c.pipeline;
  return {
      {"seed", c.seed},
      {"n_mines", c.n_mines},
      {"scenario",
       {{"grid_size", s.grid_size},
        {"n_lines", s.n_lines},
        {"altitude", s.altitude},
        {"speed", s.speed},
        {"sample_rate", s.sample_rate},
        {"noise_sigma", s.noise_sigma},
        {"background_magnitude", s.background_magnitude},
        {"background_inclination_deg", s.background_inclination_deg},
        {"min_separation", s.min_separation},
        {"max_depth", s.max_depth},
        {"motor_side", s.motor_side},
        {"sensor_spacing", s.sensor_spacing},
        {"min_chirp", s.min_chirp},
        {"max_chirp", s.max_chirp},
        {"min_motor_moment", s.min_motor_moment},
        {"max_motor_moment", s.max_motor_moment},
        {"max_placement_attempts", s.max_placement_attempts}}},
      {"pipeline",
       {{"lowpass_cutoff", p.lowpass_cutoff},
        {"lowpass_order", p.lowpass_order},
        {"rude_windows", p.rude.window_lengths},
        {"rude_nu", p.rude.nu},
        {"min_cluster_size", p.hdbscan.min_cluster_size},
        {"cluster_selection_epsilon", p.hdbscan.cluster_selection_epsilon},
        {"allow_single_cluster", p.hdbscan.allow_single_cluster},
        {"match_radius", p.match_radius},
        {"match_rule", p.match_rule == MatchRule::PerMine ? "per_mine" : "per_cluster"}}},
      {"bench1",
       {{"n_sims", c.bench1.n_sims},
        {"base_seed", c.bench1.base_seed},
        {"min_mines", c.bench1.min_mines},
        {"max_mines", c.bench1.max_mines},
        {"rude_threshold", c.bench1.rude_threshold},
        {"hard_threshold", c.bench1.hard_threshold}}},
      {"bench2",
       {{"altitudes", c.bench2.altitudes},
        {"sims_per_altitude", c.bench2.sims_per_altitude},
        {"base_seed", c.bench2.base_seed},
        {"rude_threshold", c.bench2.rude_threshold},
        {"hard_threshold", c.bench2.hard_threshold}}},
  };
}

std::string config_hash(const RunConfig& c) {
  // Worker count is deliberately absent from the echo: it cannot change results.
  const std::string text = config_to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace uavmag
