#pragma once

#include <span>
#include <string>
#include <vector>

#include "uavmag/localize.hpp"
#include "uavmag/rude.hpp"
#include "uavmag/scenario.hpp"

namespace uavmag {

enum class Cleaner { WaicUp, LowPass };
enum class Detector { Rude, Threshold };

struct MethodCombo {
  Cleaner cleaner = Cleaner::WaicUp;
  Detector detector = Detector::Rude;
  double detector_param = 0.7;  // confidence threshold, or nT limit

  [[nodiscard]] std::string name() const;  // e.g. "WAIC-UP/RUDE"
};

std::string to_string(Cleaner c);
std::string to_string(Detector d);

/// WAIC-UP/RUDE, WAIC-UP/Threshold, Low-pass/RUDE, Low-pass/Threshold.
std::vector<MethodCombo> default_combos(double rude_threshold, double hard_threshold_nt);

struct PipelineOptions {
  double lowpass_cutoff = 0.5;  // Hz
  int lowpass_order = 4;
  RudeOptions rude;
  HdbscanOptions hdbscan;
  double match_radius = 1.0;  // m
  MatchRule match_rule = MatchRule::PerMine;
  bool parallel_axes = false;
};

/// WAIC-UP on the sensor pair, or the zero-phase low-pass on sensor 2.
std::vector<Vec3> clean_survey(const SurveyRecord& record, Cleaner cleaner, const PipelineOptions& options);

struct ComboOutcome {
  MethodCombo combo;
  std::vector<DetectionCluster> clusters;
  DetectionScore score;
  MetricValue rho;  // detection channel of the cleaned field vs. truth
};

/// Cleans once per cleaner and scores every combo against the scenario mines.
std::vector<ComboOutcome> run_pipeline(const Scenario& scenario, const SurveyRecord& record,
                                       std::span<const MethodCombo> combos, const PipelineOptions& options);

/// Flags per sample for one detector on a detection channel.
std::vector<bool> detect_flags(std::span<const double> channel, Detector detector, double param,
                               const RudeOptions& rude);

}  // namespace uavmag
