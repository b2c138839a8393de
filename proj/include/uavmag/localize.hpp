#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "uavmag/hdbscan.hpp"
#include "uavmag/metrics.hpp"
#include "uavmag/scenario.hpp"

namespace uavmag {

struct DetectionCluster {
  Vec3 center;  // z = 0
  std::size_t member_count = 0;
  std::vector<std::size_t> member_indices;  // survey sample indices
};

/// |v - median_per_axis(v)|: field deviation from the series' background vector.
std::vector<double> detection_channel(std::span<const Vec3> field);

/// Flags samples with |x - median(x)| > limit. Throws unless limit > 0.
std::vector<bool> hard_threshold_detector(std::span<const double> series, double limit);

/// Flags samples with score >= threshold.
std::vector<bool> select_by_score(std::span<const double> scores, double threshold);

/// Clusters the XY positions of the flagged samples.
std::vector<DetectionCluster> cluster_flagged(std::span<const Vec3> positions, const std::vector<bool>& flags,
                                              const HdbscanOptions& options = {});

/// score >= threshold, then cluster_flagged on sensor-1 positions.
std::vector<DetectionCluster> detect_positions(const SurveyRecord& record, std::span<const double> scores,
                                               double threshold, const HdbscanOptions& options = {});

enum class MatchRule {
  /// A mine is a TP if some cluster lies within the radius; clusters within
  /// the radius of no mine are FPs. Errors: each TP mine to its nearest cluster.
  PerMine,
  /// Each cluster is a TP if within the radius of any mine, else FP; mines
  /// with no cluster in range are FNs. Errors: each TP cluster to its nearest mine.
  PerCluster,
};

struct DetectionScore {
  ConfusionCounts counts;
  std::vector<double> errors;
  /// Per cluster: nearest mine within the radius, and the distance to it.
  std::vector<std::optional<std::size_t>> matched_mine;
  std::vector<double> nearest_distance;
};

/// Horizontal matching. Throws unless radius > 0.
DetectionScore score_detections(std::span<const DetectionCluster> clusters, std::span<const MineSource> mines,
                                double radius = 1.0, MatchRule rule = MatchRule::PerMine);

/// Columns: cluster_id, x, y, member_count, matched_mine_id, error_m.
void write_detections_csv(std::ostream& out, std::span<const DetectionCluster> clusters,
                          const DetectionScore& score);

}  // namespace uavmag
