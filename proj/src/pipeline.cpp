#include "uavmag/pipeline.hpp"

#include <array>
#include <map>
#include <optional>

#include "uavmag/dsp.hpp"
#include "uavmag/waicup.hpp"

namespace uavmag {

std::string to_string(Cleaner c) { return c == Cleaner::WaicUp ? "WAIC-UP" : "Low-pass"; }

std::string to_string(Detector d) { return d == Detector::Rude ? "RUDE" : "Threshold"; }

std::string MethodCombo::name() const { return to_string(cleaner) + "/" + to_string(detector); }

std::vector<MethodCombo> default_combos(double rude_threshold, double hard_threshold_nt) {
  return {
      {Cleaner::WaicUp, Detector::Rude, rude_threshold},
      {Cleaner::WaicUp, Detector::Threshold, hard_threshold_nt},
      {Cleaner::LowPass, Detector::Rude, rude_threshold},
      {Cleaner::LowPass, Detector::Threshold, hard_threshold_nt},
  };
}

std::vector<Vec3> clean_survey(const SurveyRecord& record, Cleaner cleaner, const PipelineOptions& options) {
  if (cleaner == Cleaner::WaicUp)
    return clean_vector_pair(record.b1, record.b2, record.sample_rate, options.parallel_axes);
  const std::size_t n = record.size();
  std::vector<Vec3> out(n);
  std::vector<double> axis(n);
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < n; ++i) axis[i] = record.b2[i][a];
    const auto f = lowpass(axis, options.lowpass_cutoff, record.sample_rate, options.lowpass_order);
    for (std::size_t i = 0; i < n; ++i) out[i][a] = f[i];
  }
  return out;
}

std::vector<bool> detect_flags(std::span<const double> channel, Detector detector, double param,
                               const RudeOptions& rude) {
  if (detector == Detector::Threshold) return hard_threshold_detector(channel, param);
  const double m = median({channel.begin(), channel.end()});
  std::vector<double> centred(channel.begin(), channel.end());
  for (double& v : centred) v -= m;
  return select_by_score(confidence(centred, rude).scores, param);
}

std::vector<ComboOutcome> run_pipeline(const Scenario& scenario, const SurveyRecord& record,
                                       std::span<const MethodCombo> combos, const PipelineOptions& options) {
  const auto truth = detection_channel(record.truth1);
  struct Cleaned {
    std::vector<double> channel;
    MetricValue rho;
    std::optional<ConfidenceSeries> scores;
  };
  std::map<Cleaner, Cleaned> cache;
  std::vector<ComboOutcome> out;
  for (const auto& combo : combos) {
    auto it = cache.find(combo.cleaner);
    if (it == cache.end()) {
      Cleaned c;
      c.channel = detection_channel(clean_survey(record, combo.cleaner, options));
      c.rho = pearson(c.channel, truth);
      it = cache.emplace(combo.cleaner, std::move(c)).first;
    }
    Cleaned& cleaned = it->second;
    std::vector<bool> flags;
    if (combo.detector == Detector::Rude) {
      // Confidence does not depend on the threshold; share it across combos.
      if (!cleaned.scores) {
        const double m = median(cleaned.channel);
        std::vector<double> centred = cleaned.channel;
        for (double& v : centred) v -= m;
        cleaned.scores = confidence(centred, options.rude);
      }
      flags = select_by_score(cleaned.scores->scores, combo.detector_param);
    } else {
      flags = hard_threshold_detector(cleaned.channel, combo.detector_param);
    }
    ComboOutcome o;
    o.combo = combo;
    o.clusters = cluster_flagged(record.positions1, flags, options.hdbscan);
    o.score = score_detections(o.clusters, scenario.mines, options.match_radius, options.match_rule);
    o.rho = cleaned.rho;
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace uavmag
