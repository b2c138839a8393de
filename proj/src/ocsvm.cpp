#include "uavmag/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace uavmag {

namespace {

constexpr double kTau = 1e-12;  // floor for non-positive curvature

Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& x, double gamma) {
  const auto n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::exp(-gamma * (x.row(i) - x.row(j)).squaredNorm());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

}  // namespace

double OcsvmModel::decision(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (alpha[i] == 0.0) continue;
    sum += alpha[i] * std::exp(-gamma * (points.row(i).transpose() - x).squaredNorm());
  }
  return sum - rho;
}

OcsvmModel ocsvm_fit(const Eigen::MatrixXd& points, double nu, double gamma, const OcsvmOptions& options) {
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("ocsvm: nu must lie in (0, 1]");
  if (!(gamma > 0.0)) throw std::invalid_argument("ocsvm: gamma must be positive");
  const Eigen::Index n = points.rows();
  if (n < 3) throw std::invalid_argument("ocsvm: need at least 3 points");

  const Eigen::MatrixXd q = rbf_gram(points, gamma);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  // Feasible start: the first floor(nu n) multipliers at the bound, the
  // remainder on the next one.
  const double total = nu * static_cast<double>(n);
  const auto full = static_cast<Eigen::Index>(std::floor(total));
  for (Eigen::Index i = 0; i < std::min(full, n); ++i) alpha[i] = 1.0;
  if (full < n) alpha[full] = total - static_cast<double>(full);
  Eigen::VectorXd grad = q * alpha;

  std::size_t iter = 0;
  for (;; ++iter) {
    if (iter >= options.max_iterations)
      throw OcsvmConvergenceError("ocsvm: no convergence after " + std::to_string(iter) + " iterations", iter);
    // i maximises -G over multipliers that can grow; j minimises the
    // second-order objective decrease over those that can shrink.
    Eigen::Index i = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (alpha[t] < 1.0 && -grad[t] >= gmax) {
        gmax = -grad[t];
        i = t;
      }
    }
    Eigen::Index j = -1;
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!(alpha[t] > 0.0)) continue;
      gmax2 = std::max(gmax2, grad[t]);
      if (i < 0) continue;
      const double diff = gmax + grad[t];
      if (diff > 0.0) {
        double curv = q(i, i) + q(t, t) - 2.0 * q(i, t);
        if (curv <= 0.0) curv = kTau;
        const double obj = -diff * diff / curv;
        if (obj <= best) {
          best = obj;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < options.tolerance) break;

    double curv = q(i, i) + q(j, j) - 2.0 * q(i, j);
    if (curv <= 0.0) curv = kTau;
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    const double sum = old_i + old_j;
    double ai = old_i - (grad[i] - grad[j]) / curv;
    double aj = sum - ai;
    // Clip to the box along the line ai + aj = sum.
    if (sum > 1.0) {
      if (ai > 1.0) { ai = 1.0; aj = sum - 1.0; }
      if (aj > 1.0) { aj = 1.0; ai = sum - 1.0; }
    } else {
      if (aj < 0.0) { aj = 0.0; ai = sum; }
      if (ai < 0.0) { ai = 0.0; aj = sum; }
    }
    alpha[i] = ai;
    alpha[j] = aj;
    const double di = ai - old_i;
    const double dj = aj - old_j;
    grad += q.col(i) * di + q.col(j) * dj;
  }

  // rho: mean gradient over free multipliers, else the midpoint of the
  // feasible interval.
  double free_sum = 0.0;
  int free_count = 0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha[t] >= 1.0) {
      lb = std::max(lb, grad[t]);
    } else if (alpha[t] <= 0.0) {
      ub = std::min(ub, grad[t]);
    } else {
      free_sum += grad[t];
      ++free_count;
    }
  }
  OcsvmModel model;
  model.rho = free_count > 0 ? free_sum / free_count : 0.5 * (ub + lb);
  model.points = points;
  model.alpha = alpha;
  model.gamma = gamma;
  model.iterations = iter;
  model.training_decision = grad.array() - model.rho;
  return model;
}

std::vector<bool> ocsvm_labels(const OcsvmModel& model, bool include_boundary, const OcsvmOptions& options) {
  const double margin = options.anomaly_margin * std::max(1.0, std::abs(model.rho));
  const double cut = include_boundary ? margin : -margin;
  std::vector<bool> out(static_cast<std::size_t>(model.training_decision.size()));
  for (Eigen::Index i = 0; i < model.training_decision.size(); ++i)
    out[static_cast<std::size_t>(i)] = model.training_decision[i] < cut;
  return out;
}

std::vector<bool> ocsvm_fit_predict(const Eigen::MatrixXd& points, double nu, double gamma,
                                    const OcsvmOptions& options) {
  return ocsvm_labels(ocsvm_fit(points, nu, gamma, options), false, options);
}

double median_heuristic_gamma(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((points.row(i) - points.row(j)).squaredNorm());
  if (d.empty()) return 0.0;
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  double median = d[mid];
  if (d.size() % 2 == 0) median = 0.5 * (median + *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid)));
  return median > 0.0 ? 1.0 / (2.0 * median) : 0.0;
}

}  // namespace uavmag
