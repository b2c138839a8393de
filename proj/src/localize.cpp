#include "uavmag/localize.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "uavmag/survey_io.hpp"

namespace uavmag {

std::vector<double> detection_channel(std::span<const Vec3> field) {
  std::vector<double> axis(field.size());
  Vec3 med;
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < field.size(); ++i) axis[i] = field[i][a];
    med[a] = median(axis);
  }
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = norm(field[i] - med);
  return out;
}

std::vector<bool> hard_threshold_detector(std::span<const double> series, double limit) {
  if (!(limit > 0.0)) throw std::invalid_argument("hard_threshold_detector: limit must be positive");
  std::vector<bool> flags(series.size(), false);
  if (series.empty()) return flags;
  const double m = median({series.begin(), series.end()});
  for (std::size_t i = 0; i < series.size(); ++i) flags[i] = std::abs(series[i] - m) > limit;
  return flags;
}

std::vector<bool> select_by_score(std::span<const double> scores, double threshold) {
  std::vector<bool> flags(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) flags[i] = scores[i] >= threshold;
  return flags;
}

std::vector<DetectionCluster> cluster_flagged(std::span<const Vec3> positions, const std::vector<bool>& flags,
                                              const HdbscanOptions& options) {
  if (positions.size() != flags.size()) throw std::invalid_argument("cluster_flagged: size mismatch");
  std::vector<std::size_t> index;
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (!flags[i]) continue;
    index.push_back(i);
    pts.push_back({positions[i].x, positions[i].y});
  }
  const auto res = hdbscan(pts, options);
  std::vector<DetectionCluster> out(res.n_clusters);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const int label = res.labels[k];
    if (label < 0) continue;
    auto& c = out[static_cast<std::size_t>(label)];
    c.member_indices.push_back(index[k]);
    c.center.x += pts[k].x;
    c.center.y += pts[k].y;
  }
  for (auto& c : out) {
    c.member_count = c.member_indices.size();
    c.center.x /= static_cast<double>(c.member_count);
    c.center.y /= static_cast<double>(c.member_count);
  }
  return out;
}

std::vector<DetectionCluster> detect_positions(const SurveyRecord& record, std::span<const double> scores,
                                               double threshold, const HdbscanOptions& options) {
  const auto flags = select_by_score(scores, threshold);
  return cluster_flagged(record.positions1, flags, options);
}

DetectionScore score_detections(std::span<const DetectionCluster> clusters, std::span<const MineSource> mines,
                                double radius, MatchRule rule) {
  if (!(radius > 0.0)) throw std::invalid_argument("score_detections: radius must be positive");
  DetectionScore s;
  s.matched_mine.resize(clusters.size());
  s.nearest_distance.assign(clusters.size(), std::numeric_limits<double>::infinity());
  std::vector<double> mine_best(mines.size(), std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t m = 0; m < mines.size(); ++m) {
      const double d = horizontal_distance(clusters[c].center, mines[m].position);
      if (d < s.nearest_distance[c]) {
        s.nearest_distance[c] = d;
        if (d <= radius) s.matched_mine[c] = m;
      }
      mine_best[m] = std::min(mine_best[m], d);
    }
    if (s.nearest_distance[c] > radius) s.matched_mine[c].reset();
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (s.matched_mine[c]) {
      if (rule == MatchRule::PerCluster) {
        ++s.counts.tp;
        s.errors.push_back(s.nearest_distance[c]);
      }
    } else {
      ++s.counts.fp;
    }
  }
  for (std::size_t m = 0; m < mines.size(); ++m) {
    if (mine_best[m] <= radius) {
      if (rule == MatchRule::PerMine) {
        ++s.counts.tp;
        s.errors.push_back(mine_best[m]);
      }
    } else {
      ++s.counts.fn;
    }
  }
  return s;
}

void write_detections_csv(std::ostream& out, std::span<const DetectionCluster> clusters,
                          const DetectionScore& score) {
  out << "cluster_id,x,y,member_count,matched_mine_id,error_m\n";
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    out << c << ',' << format_double(clusters[c].center.x) << ',' << format_double(clusters[c].center.y) << ','
        << clusters[c].member_count << ',';
    if (c < score.matched_mine.size() && score.matched_mine[c]) {
      out << *score.matched_mine[c] << ',' << format_double(score.nearest_distance[c]);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

}  // namespace uavmag
