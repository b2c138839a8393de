#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "uavmag/ocsvm.hpp"

using namespace uavmag;

namespace {

Eigen::MatrixXd gaussian_cloud(oracle::Draws& d, int n, double sx = 1.0, double sy = 1.0) {
  Eigen::MatrixXd p(n, 2);
  for (int i = 0; i < n; ++i) {
    p(i, 0) = sx * d.normal();
    p(i, 1) = sy * d.normal();
  }
  return p;
}

// Labels agree with the QP oracle wherever the oracle's decision is clear of
// the boundary; boundary points (free support vectors) are nominal in both.
void check_against_oracle(const Eigen::MatrixXd& pts, double nu, double gamma) {
  const auto model = ocsvm_fit(pts, nu, gamma);
  const auto labels = ocsvm_labels(model, false);
  const auto qp = oracle::ocsvm_dual_qp(pts, nu, gamma);
  const Eigen::VectorXd qa = model.training_decision.array() + model.rho;
  const double obj = 0.5 * model.alpha.dot(qa);
  CHECK(obj == doctest::Approx(qp.objective).epsilon(1e-6));
  CHECK(model.rho == doctest::Approx(qp.rho).epsilon(1e-4));
  CHECK(model.alpha.sum() == doctest::Approx(nu * static_cast<double>(pts.rows())).epsilon(1e-10));
  int clear = 0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const double dq = qp.decision[i];
    if (std::abs(dq) <= 1e-4 * std::max(1.0, std::abs(qp.rho))) continue;
    ++clear;
    CAPTURE(i);
    CHECK(labels[static_cast<std::size_t>(i)] == (dq < 0.0));
  }
  CHECK(clear > pts.rows() / 2);
}

}  // namespace

TEST_CASE("OC-SVM matches the dense dual QP") {
  for (int seed = 0; seed < 6; ++seed) {
    oracle::Draws d(static_cast<std::uint64_t>(seed) + 900);
    const int n = 40 + 16 * seed;  // up to 120 points
    auto pts = gaussian_cloud(d, n, 1.0, 0.4 + 0.2 * seed);
    pts(0, 0) += 6.0;
    CAPTURE(seed);
    for (double nu : {0.1, 0.2, 0.5}) {
      CAPTURE(nu);
      check_against_oracle(pts, nu, median_heuristic_gamma(pts));
    }
  }
}

TEST_CASE("far point outside a tight blob is anomalous") {
  oracle::Draws d(12);
  Eigen::MatrixXd pts(101, 2);
  for (int i = 0; i < 100; ++i) {
    pts(i, 0) = 0.1 * d.normal();
    pts(i, 1) = 0.1 * d.normal();
  }
  pts(100, 0) = 5.0;  // 50 blob radii
  pts(100, 1) = 0.0;
  const double gamma = median_heuristic_gamma(pts);
  const auto labels = ocsvm_fit_predict(pts, 0.1, gamma);
  CHECK(labels[100]);
  const auto qp = oracle::ocsvm_dual_qp(pts, 0.1, gamma);
  CHECK(qp.decision[100] < 0.0);
  check_against_oracle(pts, 0.1, gamma);
}

TEST_CASE("anomalous fraction respects nu") {
  for (double nu : {0.05, 0.1, 0.2, 0.4}) {
    for (int draw = 0; draw < 20; ++draw) {
      oracle::Draws d(static_cast<std::uint64_t>(draw) * 31 + 5);
      const int n = 50 + 10 * draw;
      const auto pts = gaussian_cloud(d, n, 1.0, 0.5);
      const auto labels = ocsvm_fit_predict(pts, nu, median_heuristic_gamma(pts));
      const double frac = static_cast<double>(std::count(labels.begin(), labels.end(), true)) / n;
      CAPTURE(nu);
      CAPTURE(draw);
      CHECK(frac <= nu + 0.05);
    }
  }
}

TEST_CASE("boundary rule flags at least the strict set") {
  oracle::Draws d(77);
  const auto pts = gaussian_cloud(d, 42);
  const auto model = ocsvm_fit(pts, 0.2, median_heuristic_gamma(pts));
  const auto strict = ocsvm_labels(model, false);
  const auto boundary = ocsvm_labels(model, true);
  for (std::size_t i = 0; i < strict.size(); ++i)
    if (strict[i]) CHECK(boundary[i]);
  // Every point outside or on the boundary carries weight.
  for (std::size_t i = 0; i < boundary.size(); ++i)
    if (boundary[i]) CHECK(model.alpha[static_cast<Eigen::Index>(i)] > 0.0);
}

TEST_CASE("decision function agrees with training decisions") {
  oracle::Draws d(3);
  const auto pts = gaussian_cloud(d, 60);
  const auto model = ocsvm_fit(pts, 0.3, 0.5);
  for (Eigen::Index i = 0; i < pts.rows(); i += 7)
    CHECK(model.decision(pts.row(i).transpose()) == doctest::Approx(model.training_decision[i]).epsilon(1e-12));
}

TEST_CASE("OC-SVM is deterministic") {
  oracle::Draws d(8);
  const auto pts = gaussian_cloud(d, 80);
  const double g = median_heuristic_gamma(pts);
  CHECK(ocsvm_fit_predict(pts, 0.2, g) == ocsvm_fit_predict(pts, 0.2, g));
}

TEST_CASE("OC-SVM errors") {
  oracle::Draws d(1);
  const auto pts = gaussian_cloud(d, 30);
  CHECK_THROWS_AS(ocsvm_fit(pts, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ocsvm_fit(pts, 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ocsvm_fit(pts, 0.2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ocsvm_fit(pts.topRows(2), 0.2, 1.0), std::invalid_argument);

  OcsvmOptions opt;
  opt.max_iterations = 1;
  try {
    ocsvm_fit(pts, 0.25, 1.0, opt);
    FAIL("expected a convergence error");
  } catch (const OcsvmConvergenceError& e) {
    CHECK(e.iterations() == 1);
    CHECK(std::string(e.what()).find('1') != std::string::npos);
  }
}

TEST_CASE("median heuristic") {
  Eigen::MatrixXd same(5, 2);
  same.setConstant(2.0);
  CHECK(median_heuristic_gamma(same) == 0.0);
  Eigen::MatrixXd line(3, 2);
  line << 0, 0, 1, 0, 3, 0;
  // Squared distances 1, 9, 4: median 4.
  CHECK(median_heuristic_gamma(line) == doctest::Approx(1.0 / 8.0));
}
