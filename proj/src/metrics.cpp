#include "uavmag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>


#include "uavmag/survey_io.hpp"

namespace uavmag {

namespace {

MetricValue ratio(std::size_t num, std::size_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

nlohmann::json metric_json(const MetricValue& m) { return {{"value", m.value}, {"degenerate", m.degenerate}}; }

}  // namespace

MetricValue precision(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fp); }

MetricValue recall(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fn); }

MetricValue f1(double p, double r) {
  if (!(p + r > 0.0)) return {0.0, true};
  return {2.0 * p * r / (p + r), false};
}

// 2PR/(P+R) on counts is 2TP/(2TP+FP+FN); the count form is exact.
MetricValue f1(const ConfusionCounts& c) { return ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn); }

MetricValue threat_score(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fp + c.fn); }

MetricValue pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: series lengths differ");
  const std::size_t n = x.size();
  if (n < 2) return {0.0, true};
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return {0.0, true};
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double MetricsReport::median_error() const { return median(localization_errors); }

MetricsReport make_report(std::string name, const ConfusionCounts& pooled, std::span<const double> rhos,
                          std::vector<double> localization_errors) {
  MetricsReport r;
  r.name = std::move(name);
  r.counts = pooled;
  r.precision = precision(pooled);
  r.recall = recall(pooled);
  r.f1 = f1(pooled);
  r.threat_score = threat_score(pooled);
  r.pearson_rho =
      rhos.empty() ? 0.0 : std::accumulate(rhos.begin(), rhos.end(), 0.0) / static_cast<double>(rhos.size());
  r.localization_errors = std::move(localization_errors);
  return r;
}

nlohmann::json to_json(const MetricsReport& r) {
  const double med = r.median_error();
  return {
      {"method", r.name},
      {"tp", r.counts.tp},
      {"fp", r.counts.fp},
      {"fn", r.counts.fn},
      {"precision", metric_json(r.precision)},
      {"recall", metric_json(r.recall)},
      {"f1", metric_json(r.f1)},
      {"threat_score", metric_json(r.threat_score)},
      {"pearson_rho_mean", r.pearson_rho},
      {"median_localization_error_m", std::isnan(med) ? nlohmann::json(nullptr) : nlohmann::json(med)},
      {"n_localization_errors", r.localization_errors.size()},
  };
}

void write_table1_csv(std::ostream& out, std::span<const MetricsReport> reports) {
  out << "method,FP,TP,FN,Precision,Recall,F1,Threat,rho,median_error_m\n";
  for (const auto& r : reports) {
    const double med = r.median_error();
    out << r.name << ',' << r.counts.fp << ',' << r.counts.tp << ',' << r.counts.fn << ','
        << format_double(r.precision.value) << ',' << format_double(r.recall.value) << ','
        << format_double(r.f1.value) << ',' << format_double(r.threat_score.value) << ','
        << format_double(r.pearson_rho) << ',' << (std::isnan(med) ? std::string() : format_double(med)) << '\n';
  }
}

}  // namespace uavmag
