#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace uavmag {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

/// A metric value; `degenerate` marks a zero denominator (value is then 0).
struct MetricValue {
  double value = 0.0;
  bool degenerate = false;
};

MetricValue precision(const ConfusionCounts& c);
MetricValue recall(const ConfusionCounts& c);
MetricValue f1(const ConfusionCounts& c);
/// Harmonic mean of given precision and recall; 0 (degenerate) when both are 0.
MetricValue f1(double precision, double recall);
MetricValue threat_score(const ConfusionCounts& c);
/// Sample correlation. Degenerate (value 0) for zero variance or fewer than 2
/// samples; throws std::invalid_argument on a length mismatch.
MetricValue pearson(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);

struct MetricsReport {
  std::string name;
  ConfusionCounts counts;
  MetricValue precision;
  MetricValue recall;
  MetricValue f1;
  MetricValue threat_score;
  double pearson_rho = 0.0;  // mean over simulations
  std::vector<double> localization_errors;

  [[nodiscard]] double median_error() const;  // NaN when there are no errors
};

/// Pools counts (summed) and rho (averaged) into a report.
MetricsReport make_report(std::string name, const ConfusionCounts& pooled, std::span<const double> rhos,
                          std::vector<double> localization_errors);

nlohmann::json to_json(const MetricsReport& report);

/// Columns: method, FP, TP, FN, Precision, Recall, F1, Threat, rho, median_error_m.
void write_table1_csv(std::ostream& out, std::span<const MetricsReport> reports);

}  // namespace uavmag
