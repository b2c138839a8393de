#pragma once

// Independent reference implementations used by the unit tests and the
// acceptance binary. Nothing here calls into the library code under test
// except for types.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "uavmag/hdbscan.hpp"
#include "uavmag/vec3.hpp"

namespace oracle {

/// Dipole field in nT, written out component by component.
uavmag::Vec3 dipole_scalar(const uavmag::Vec3& m, const uavmag::Vec3& src, const uavmag::Vec3& obs);

/// Cyclic Jacobi rotations on a symmetric matrix. Eigenvalues descending.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a);

/// Dense one-class SVM dual, min 1/2 a'Qa s.t. 0 <= a <= 1, sum a = nu n,
/// by accelerated projected gradient.
struct QpSolution {
  Eigen::VectorXd alpha;
  Eigen::VectorXd decision;  // Qa - rho
  double rho = 0.0;
  double objective = 0.0;
};
QpSolution ocsvm_dual_qp(const Eigen::MatrixXd& points, double nu, double gamma, int iterations = 40000);

/// Butterworth low-pass magnitude response of one pass.
double butterworth_gain(double f, double cutoff, int order);

/// Deterministic Gaussian / uniform draws independent of the library Rng.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  double uniform();
  double normal();

 private:
  std::uint64_t state_;
};

/// Outcome of the three clustering suites over `seeds` seeds each.
struct ClusterSuites {
  int two_blob_pass = 0;
  int single_blob_pass = 0;
  int uniform_pass = 0;
  int seeds = 0;
};
ClusterSuites run_cluster_suites(int seeds);

/// Same noise set and the same clusters up to renaming.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace oracle
