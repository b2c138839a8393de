#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uavmag {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct HdbscanOptions {
  std::size_t min_cluster_size = 5;
  /// Neighbour count for core distances, the point itself included; 0 means min_cluster_size.
  std::size_t min_samples = 0;
  /// Let the root of the condensed tree be selected when nothing below it is.
  bool allow_single_cluster = true;
  /// Clusters born below this distance (m) are merged into the ancestor alive
  /// at that distance; 0 disables the merge.
  double cluster_selection_epsilon = 0.3;
};

struct HdbscanResult {
  /// Cluster index per point, -1 for noise. Clusters are numbered by centroid
  /// (x, then y), so the numbering does not depend on input order.
  std::vector<int> labels;
  std::size_t n_clusters = 0;
};

/// Mutual-reachability MST, condensed tree, excess-of-mass selection.
/// Equal-weight MST edges are merged as one level, which makes the result
/// independent of point order. Throws std::invalid_argument if
/// min_cluster_size < 2.
HdbscanResult hdbscan(std::span<const Point2> points, const HdbscanOptions& options = {});

}  // namespace uavmag
