// uavmag: simulate surveys, clean and detect, run the Monte Carlo benchmarks.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "uavmag/bench.hpp"
#include "uavmag/config.hpp"
#include "uavmag/dsp.hpp"
#include "uavmag/localize.hpp"
#include "uavmag/pipeline.hpp"
#include "uavmag/rude.hpp"
#include "uavmag/survey_io.hpp"
#include "uavmag/svg_plot.hpp"
#include "uavmag/version.hpp"

namespace fs = std::filesystem;
using namespace uavmag;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool plot = false;
  std::string input;
  std::string scenario_path;
  std::string method = "waicup";
  std::string detector = "rude";
  std::optional<double> cutoff;
  std::optional<double> param;
};

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig resolve_config(const Options& o) {
  RunConfig c = o.config_path.empty() ? parse_config("") : load_config(o.config_path);
  if (o.seed) {
    c.seed = *o.seed;
    c.bench1.base_seed = *o.seed;
    c.bench2.base_seed = *o.seed;
  }
  if (o.workers) {
    if (*o.workers < 1) throw ConfigError("workers: must be >= 1");
    c.workers = *o.workers;
  }
  if (o.cutoff) {
    if (!(*o.cutoff > 0.0)) throw ConfigError("pipeline.lowpass_cutoff: must be positive");
    c.pipeline.lowpass_cutoff = *o.cutoff;
  }
  propagate_shared(c);
  return c;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError("cannot write " + path.string());
  return f;
}

void write_text(const fs::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw CliError("write failed: " + path.string());
}

FileProvenance provenance(const RunConfig& c, std::vector<std::uint64_t> seeds) {
  return {tool_version(), config_hash(c), std::move(seeds)};
}

Cleaner parse_cleaner(const std::string& m) {
  if (m == "waicup") return Cleaner::WaicUp;
  if (m == "lowpass") return Cleaner::LowPass;
  throw CliError("method: expected waicup or lowpass, got '" + m + "'");
}

Detector parse_detector(const std::string& d) {
  if (d == "rude") return Detector::Rude;
  if (d == "threshold") return Detector::Threshold;
  throw CliError("detector: expected rude or threshold, got '" + d + "'");
}

SurveyRecord read_input(const Options& o, const RunConfig& c) {
  if (o.input.empty()) throw CliError("--input is required");
  std::ifstream in(o.input);
  if (!in) throw CliError("cannot open input " + o.input);
  auto rec = read_survey_csv(in, Vec3{0.0, 0.0, -c.scenario.sensor_spacing});
  return rec;
}

nlohmann::json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }

nlohmann::json scenario_json(const Scenario& s, const RunConfig& c) {
  nlohmann::json j;
  j["tool"] = "uavmag";
  j["version"] = tool_version();
  j["config_hash"] = config_hash(c);
  j["seed"] = s.seed;
  j["config"] = config_to_json(c);
  j["mines"] = nlohmann::json::array();
  for (const auto& m : s.mines) j["mines"].push_back({{"position", vec_json(m.position)}, {"moment", vec_json(m.moment)}});
  j["motors"] = nlohmann::json::array();
  for (const auto& m : s.motors) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& k : m.components)
      comps.push_back({{"kind", to_string(k.kind)},
                       {"base_frequency_hz", k.base_frequency},
                       {"chirp_factor", k.chirp_factor},
                       {"moment_amplitude", k.moment_amplitude},
                       {"axis", vec_json(k.axis)},
                       {"phase", k.phase}});
    j["motors"].push_back({{"offset", vec_json(m.offset)}, {"components", comps}});
  }
  j["background_field_nt"] = vec_json(s.background_field);
  j["altitude_m"] = s.path.altitude;
  j["n_samples"] = s.path.sample_count();
  return j;
}

std::vector<MineSource> read_mines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open scenario " + path);
  nlohmann::json j;
  try {
    in >> j;
    std::vector<MineSource> mines;
    for (const auto& m : j.at("mines")) {
      const auto& p = m.at("position");
      const auto& q = m.at("moment");
      mines.push_back({{p.at(0), p.at(1), p.at(2)}, {q.at(0), q.at(1), q.at(2)}});
    }
    return mines;
  } catch (const nlohmann::json::exception& e) {
    throw CliError("scenario " + path + ": " + e.what());
  }
}

int cmd_simulate(const Options& o) {
  const auto c = resolve_config(o);
  const auto scenario = generate_random_scenario(c.seed, c.n_mines, c.scenario);
  const auto record = simulate(scenario);
  fs::create_directories(o.out_dir);
  {
    auto f = open_out(fs::path(o.out_dir) / "survey.csv");
    write_survey_csv(f, record, provenance(c, {c.seed}));
  }
  write_text(fs::path(o.out_dir) / "scenario.json", scenario_json(scenario, c).dump(2) + "\n");
  std::cout << "wrote " << record.size() << " samples, " << scenario.mines.size() << " mines to " << o.out_dir
            << "\n";
  return 0;
}

int cmd_clean(const Options& o) {
  const auto c = resolve_config(o);
  const auto record = read_input(o, c);
  const Cleaner cleaner = parse_cleaner(o.method);
  const auto cleaned = clean_survey(record, cleaner, c.pipeline);
  const auto channel = detection_channel(cleaned);
  const auto truth = detection_channel(record.truth1);
  const auto rho = pearson(channel, truth);
  fs::create_directories(o.out_dir);
  {
    auto f = open_out(fs::path(o.out_dir) / "cleaned.csv");
    f << provenance(c, {c.seed}).header_line() << '\n' << "t,bx,by,bz,channel\n";
    for (std::size_t i = 0; i < cleaned.size(); ++i)
      f << format_double(record.times[i]) << ',' << format_double(cleaned[i].x) << ','
        << format_double(cleaned[i].y) << ',' << format_double(cleaned[i].z) << ',' << format_double(channel[i])
        << '\n';
  }
  if (o.plot) {
    const auto raw = detection_channel(cleaner == Cleaner::WaicUp ? record.b1 : record.b2);
    write_text(fs::path(o.out_dir) / "clean.svg",
               svg_panels({{"raw (sensor " + std::string(cleaner == Cleaner::WaicUp ? "1" : "2") + ")", raw},
                           {"cleaned (" + to_string(cleaner) + ")", channel},
                           {"truth", truth}},
                          record.sample_rate, "|B - median| (nT)"));
  }
  std::cout << "method=" << to_string(cleaner) << " rho=" << format_double(rho.value)
            << (rho.degenerate ? " (degenerate)" : "") << "\n";
  return 0;
}

int cmd_detect(const Options& o) {
  const auto c = resolve_config(o);
  const auto record = read_input(o, c);
  const Cleaner cleaner = parse_cleaner(o.method);
  const Detector detector = parse_detector(o.detector);
  const double param = o.param.value_or(detector == Detector::Rude ? c.bench1.rude_threshold : c.bench1.hard_threshold);
  if (!(param > 0.0)) throw CliError("param: must be positive");
  const auto channel = detection_channel(clean_survey(record, cleaner, c.pipeline));
  fs::create_directories(o.out_dir);
  std::vector<bool> flags;
  if (detector == Detector::Rude) {
    const double m = median(channel);
    std::vector<double> centred = channel;
    for (double& v : centred) v -= m;
    const auto scores = confidence(centred, c.pipeline.rude);
    auto f = open_out(fs::path(o.out_dir) / "confidence.csv");
    f << provenance(c, {c.seed}).header_line() << '\n';
    write_confidence_csv(f, scores, record.sample_rate);
    flags = select_by_score(scores.scores, param);
  } else {
    flags = hard_threshold_detector(channel, param);
  }
  const auto clusters = cluster_flagged(record.positions1, flags, c.pipeline.hdbscan);
  std::vector<MineSource> mines;
  if (!o.scenario_path.empty()) mines = read_mines(o.scenario_path);
  const auto score = score_detections(clusters, mines, c.pipeline.match_radius, c.pipeline.match_rule);
  {
    auto f = open_out(fs::path(o.out_dir) / "detections.csv");
    f << provenance(c, {c.seed}).header_line() << '\n';
    write_detections_csv(f, clusters, score);
  }
  std::cout << clusters.size() << " clusters";
  if (!o.scenario_path.empty())
    std::cout << ", tp=" << score.counts.tp << " fp=" << score.counts.fp << " fn=" << score.counts.fn;
  std::cout << "\n";
  return 0;
}

void write_bench_common(const fs::path& dir, const BenchmarkResult& r, const FileProvenance& p) {
  {
    auto f = open_out(dir / "results.csv");
    write_results_csv(f, r, p);
  }
  auto f = open_out(dir / "summary.json");
  write_summary_json(f, r, p);
}

void print_table(const std::vector<MetricsReport>& reports) {
  std::ostringstream s;
  write_table1_csv(s, reports);
  std::cout << s.str();
}

int cmd_bench1(const Options& o) {
  const auto c = resolve_config(o);
  const auto result = run_benchmark1(c.bench1);
  const auto p = provenance(c, result.seeds);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_bench_common(dir, result, p);
  {
    auto f = open_out(dir / "table1.csv");
    write_table1(f, result, p);
  }
  if (o.plot) {
    std::vector<Series> groups;
    for (const auto& r : result.pooled) groups.push_back({r.name, r.localization_errors});
    write_text(dir / "localization_errors.svg", svg_box_plot(groups, "localization error (m)"));
  }
  print_table(result.pooled);
  return 0;
}

int cmd_bench2(const Options& o) {
  const auto c = resolve_config(o);
  const auto result = run_benchmark2(c.bench2);
  const auto p = provenance(c, result.seeds);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_bench_common(dir, result, p);
  {
    auto f = open_out(dir / "altitude_sweep.csv");
    write_altitude_sweep_csv(f, result, p);
  }
  if (o.plot) {
    const auto& alts = c.bench2.altitudes;
    std::vector<Series> f1_lines, rho_lines;
    for (const auto& r : result.pooled) {
      Series f1s{r.name, {}}, rhos{r.name, {}};
      for (const auto& pt : result.sweep) {
        if (pt.report.name != r.name) continue;
        f1s.values.push_back(pt.report.f1.value);
        rhos.values.push_back(pt.report.pearson_rho);
      }
      f1_lines.push_back(f1s);
      if (r.name.ends_with("/RUDE")) rho_lines.push_back({r.name.substr(0, r.name.find('/')), rhos.values});
    }
    write_text(dir / "altitude_f1.svg", svg_line_plot(alts, f1_lines, "altitude (m)", "F1"));
    write_text(dir / "altitude_rho.svg", svg_line_plot(alts, rho_lines, "altitude (m)", "Pearson rho"));
  }
  std::ostringstream s;
  write_altitude_sweep_csv(s, result, p);
  std::cout << s.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV magnetometer survey simulation, interference cancellation and landmine detection"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "YAML config file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--seed", o.seed, "seed (base seed for benchmarks)");
    sub->add_option("--workers", o.workers, "worker threads");
    sub->add_flag("--plot", o.plot, "also write SVG plots");
  };
  auto* sim = app.add_subcommand("simulate", "simulate one random survey");
  auto* clean = app.add_subcommand("clean", "clean a survey CSV");
  auto* detect = app.add_subcommand("detect", "clean, detect and cluster a survey CSV");
  auto* b1 = app.add_subcommand("bench1", "randomized Monte Carlo benchmark");
  auto* b2 = app.add_subcommand("bench2", "fixed-layout altitude sweep");
  for (auto* s : {sim, clean, detect, b1, b2}) add_common(s);
  for (auto* s : {clean, detect}) {
    s->add_option("--input", o.input, "survey CSV")->required();
    s->add_option("--method", o.method, "waicup or lowpass");
    s->add_option("--cutoff", o.cutoff, "low-pass cutoff (Hz)");
  }
  detect->add_option("--detector", o.detector, "rude or threshold");
  detect->add_option("--param", o.param, "confidence threshold or nT limit");
  detect->add_option("--scenario", o.scenario_path, "scenario.json with true mine positions for scoring");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (*sim) return cmd_simulate(o);
    if (*clean) return cmd_clean(o);
    if (*detect) return cmd_detect(o);
    if (*b1) return cmd_bench1(o);
    if (*b2) return cmd_bench2(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
