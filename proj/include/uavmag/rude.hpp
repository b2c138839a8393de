#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uavmag/ocsvm.hpp"

namespace uavmag {

/// Columns are consecutive non-overlapping intervals: data(r, c) = series[c L + r].
struct TrajectoryMatrix {
  Eigen::MatrixXd data;  // L x R
  std::size_t window_length = 0;
  std::size_t n_intervals = 0;
};

/// Intervals projected on the two leading principal directions.
struct ReducedPoints {
  Eigen::MatrixXd points;             // R x 2
  std::array<double, 2> eigenvalues;  // covariance eigenvalues, descending
};

struct ConfidenceSeries {
  std::vector<double> scores;
  std::vector<std::size_t> window_lengths;
};

struct RudeOptions {
  std::vector<std::size_t> window_lengths{32, 64, 128, 256, 512};
  double nu = 0.2;
  /// Count boundary support vectors as anomalous (see ocsvm_labels).
  bool include_boundary = true;
  OcsvmOptions svm;
};

/// Throws std::invalid_argument unless L >= 2 and series.size() >= 2 L.
TrajectoryMatrix build_trajectory(std::span<const double> series, std::size_t window_length);

/// PCA with intervals as observations. Uses the R x R Gram matrix when L > R.
/// Each eigenvector's largest-magnitude entry is made positive. Needs R >= 3.
ReducedPoints pca2(const TrajectoryMatrix& matrix);

/// Labels each interval with the one-class SVM (median-heuristic gamma;
/// identical points are all nominal) and expands labels to samples.
/// Samples past the last full interval are left unlabeled (-1).
std::vector<int> window_labels(std::span<const double> series, std::size_t window_length,
                               const RudeOptions& options = {});

/// Fraction of covering windows that flagged each sample; 0 where none cover.
ConfidenceSeries confidence(std::span<const double> series, const RudeOptions& options = {});

/// Columns: t, score.
void write_confidence_csv(std::ostream& out, const ConfidenceSeries& scores, double sample_rate);

}  // namespace uavmag
