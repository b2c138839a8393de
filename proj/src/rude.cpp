#include "uavmag/rude.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "uavmag/survey_io.hpp"

namespace uavmag {

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

TrajectoryMatrix build_trajectory(std::span<const double> series, std::size_t window_length) {
  if (window_length < 2) throw std::invalid_argument("build_trajectory: window length must be >= 2");
  if (series.size() < 2 * window_length)
    throw std::invalid_argument("build_trajectory: window length too large for series");
  const std::size_t r = series.size() / window_length;
  TrajectoryMatrix m;
  m.window_length = window_length;
  m.n_intervals = r;
  m.data.resize(static_cast<Eigen::Index>(window_length), static_cast<Eigen::Index>(r));
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t k = 0; k < window_length; ++k)
      m.data(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = series[c * window_length + k];
  return m;
}

ReducedPoints pca2(const TrajectoryMatrix& matrix) {
  const Eigen::Index l = matrix.data.rows();
  const Eigen::Index r = matrix.data.cols();
  if (r < 3) throw std::invalid_argument("pca2: need at least 3 intervals");
  // Observations in rows.
  Eigen::MatrixXd x = matrix.data.transpose();
  x.rowwise() -= x.colwise().mean();
  const double denom = static_cast<double>(r - 1);

  ReducedPoints out;
  out.points = Eigen::MatrixXd::Zero(r, 2);
  out.eigenvalues = {0.0, 0.0};
  if (x.cwiseAbs().maxCoeff() == 0.0) return out;

  Eigen::MatrixXd directions = Eigen::MatrixXd::Zero(l, 2);
  if (l <= r) {
    const Eigen::MatrixXd cov = (x.transpose() * x) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    for (int k = 0; k < 2 && k < l; ++k) {
      out.eigenvalues[k] = es.eigenvalues()[l - 1 - k];
      directions.col(k) = es.eigenvectors().col(l - 1 - k);
    }
  } else {
    // Same nonzero spectrum via X X' / (R - 1); v = X' u / |X' u|.
    const Eigen::MatrixXd gram = (x * x.transpose()) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    for (int k = 0; k < 2 && k < r; ++k) {
      out.eigenvalues[k] = es.eigenvalues()[r - 1 - k];
      Eigen::VectorXd v = x.transpose() * es.eigenvectors().col(r - 1 - k);
      const double norm = v.norm();
      if (norm > 0.0) directions.col(k) = v / norm;
    }
  }
  const double top = std::max(out.eigenvalues[0], 0.0);
  for (int k = 0; k < 2; ++k) {
    if (!(out.eigenvalues[k] > 1e-14 * top)) {
      // Rank-deficient: the direction is arbitrary, so the coordinate is 0.
      out.eigenvalues[k] = std::max(out.eigenvalues[k], 0.0);
      directions.col(k).setZero();
      continue;
    }
    fix_sign(directions.col(k));
  }
  out.points = x * directions;
  return out;
}

std::vector<int> window_labels(std::span<const double> series, std::size_t window_length,
                               const RudeOptions& options) {
  const auto traj = build_trajectory(series, window_length);
  const auto reduced = pca2(traj);
  std::vector<int> labels(series.size(), -1);
  const double gamma = median_heuristic_gamma(reduced.points);
  std::vector<bool> anomalous(traj.n_intervals, false);
  if (gamma > 0.0)
    anomalous = ocsvm_labels(ocsvm_fit(reduced.points, options.nu, gamma, options.svm), options.include_boundary,
                             options.svm);
  for (std::size_t c = 0; c < traj.n_intervals; ++c)
    for (std::size_t k = 0; k < window_length; ++k) labels[c * window_length + k] = anomalous[c] ? 1 : 0;
  return labels;
}

ConfidenceSeries confidence(std::span<const double> series, const RudeOptions& options) {
  const std::size_t n = series.size();
  std::vector<double> hits(n, 0.0);
  std::vector<double> cover(n, 0.0);
  for (const std::size_t l : options.window_lengths) {
    const auto labels = window_labels(series, l, options);
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] < 0) continue;
      cover[i] += 1.0;
      hits[i] += labels[i];
    }
  }
  ConfidenceSeries out;
  out.window_lengths = options.window_lengths;
  out.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.scores[i] = cover[i] > 0.0 ? hits[i] / cover[i] : 0.0;
  return out;
}

void write_confidence_csv(std::ostream& out, const ConfidenceSeries& scores, double sample_rate) {
  out << "t,score\n";
  for (std::size_t i = 0; i < scores.scores.size(); ++i)
    out << format_double(static_cast<double>(i) / sample_rate) << ',' << format_double(scores.scores[i]) << '\n';
}

}  // namespace uavmag
