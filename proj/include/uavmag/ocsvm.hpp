#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace uavmag {

class OcsvmConvergenceError : public std::runtime_error {
 public:
  OcsvmConvergenceError(const std::string& what, std::size_t iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  [[nodiscard]] std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

struct OcsvmOptions {
  double tolerance = 1e-8;  // maximal KKT violation at exit
  std::size_t max_iterations = 10'000'000;
  /// Decisions within anomaly_margin * max(1, rho) of zero count as on the boundary.
  double anomaly_margin = 1e-6;
};

/// One-class SVM with an RBF kernel exp(-gamma |x - y|^2), trained on its own
/// points. Dual: min 1/2 a'Qa s.t. 0 <= a_i <= 1, sum a = nu * n.
struct OcsvmModel {
  Eigen::MatrixXd points;  // one row per training point
  Eigen::VectorXd alpha;
  double rho = 0.0;
  double gamma = 0.0;
  std::size_t iterations = 0;
  /// sum_i alpha_i K(x_i, .) - rho at each training point.
  Eigen::VectorXd training_decision;

  [[nodiscard]] double decision(const Eigen::VectorXd& x) const;
};

/// Solves the dual by SMO with second-order working-set selection. Throws
/// std::invalid_argument for nu outside (0, 1], gamma <= 0 or fewer than 3
/// points, and OcsvmConvergenceError when max_iterations is exhausted.
OcsvmModel ocsvm_fit(const Eigen::MatrixXd& points, double nu, double gamma, const OcsvmOptions& options = {});

/// Strictly outside: decision below minus the margin. With `include_boundary`
/// the support vectors on the boundary count too; an isolated point with
/// rho < 1 always sits exactly there (alpha_i = rho), so only this rule can
/// flag it when there are few points.
std::vector<bool> ocsvm_labels(const OcsvmModel& model, bool include_boundary, const OcsvmOptions& options = {});

/// true = anomalous (strict rule).
std::vector<bool> ocsvm_fit_predict(const Eigen::MatrixXd& points, double nu, double gamma,
                                    const OcsvmOptions& options = {});

/// 1 / (2 * median pairwise squared distance); 0 when that median is 0.
double median_heuristic_gamma(const Eigen::MatrixXd& points);

}  // namespace uavmag
