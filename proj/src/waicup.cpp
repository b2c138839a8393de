#include "uavmag/waicup.hpp"

#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "uavmag/survey_io.hpp"

namespace uavmag {

GainProfile estimate_gain(const WaveletSpectrum& w1, const WaveletSpectrum& w2, double epsilon) {
  if (!w1.same_shape(w2)) throw std::invalid_argument("estimate_gain: spectra differ in scales or length");
  const std::size_t ns = w1.n_scales();
  GainProfile g;
  g.scales = w1.scales;
  g.k_hat.resize(ns);
  g.weight.resize(ns);
  g.degenerate.resize(ns);
  for (std::size_t j = 0; j < ns; ++j) {
    const auto a = w1.row(j);
    const auto b = w2.row(j);
    double dd = 0.0;   // ||D||^2
    double dw1 = 0.0;  // Re sum conj(D) W1
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto d = b[i] - a[i];
      dd += std::norm(d);
      dw1 += d.real() * a[i].real() + d.imag() * a[i].imag();
    }
    // K - 1 = <D,W2>/<D,W1> - 1 = ||D||^2 / <D,W1>.
    const bool degenerate = !(dd > 0.0) || dd < epsilon * std::abs(dw1);
    g.degenerate[j] = degenerate;
    g.weight[j] = dd > 0.0 ? dw1 / dd : 0.0;
    g.k_hat[j] = dw1 != 0.0 ? 1.0 + dd / dw1 : std::numeric_limits<double>::infinity();
  }
  return g;
}

WaveletSpectrum reconstruct(const WaveletSpectrum& w1, const WaveletSpectrum& w2, const GainProfile& gains) {
  if (!w1.same_shape(w2) || gains.weight.size() != w1.n_scales() || gains.degenerate.size() != w1.n_scales())
    throw std::invalid_argument("reconstruct: inconsistent spectra and gain profile");
  WaveletSpectrum out = w1;
  for (std::size_t j = 0; j < w1.n_scales(); ++j) {
    auto x = out.row(j);
    const auto a = w1.row(j);
    const auto b = w2.row(j);
    if (gains.degenerate[j]) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * (a[i] + b[i]);
    } else {
      // (K W1 - W2) / (K - 1) rewritten as W1 - c (W2 - W1) with c = 1 / (K - 1).
      const double c = gains.weight[j];
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = a[i] - c * (b[i] - a[i]);
    }
  }
  return out;
}

std::vector<double> clean_channel_pair(std::span<const double> b1, std::span<const double> b2, double sample_rate,
                                       std::span<const double> scales, double epsilon, GainProfile* gains_out) {
  if (b1.size() != b2.size()) throw std::invalid_argument("clean_channel_pair: series lengths differ");
  std::vector<double> bank;
  if (scales.empty()) {
    bank = default_scales(b1.size());
    scales = bank;
  }
  const auto w1 = cwt(b1, scales, sample_rate);
  const auto w2 = cwt(b2, scales, sample_rate);
  const auto gains = estimate_gain(w1, w2, epsilon);
  auto out = icwt(reconstruct(w1, w2, gains));
  const double mean = std::accumulate(b1.begin(), b1.end(), 0.0) / static_cast<double>(b1.size());
  for (double& v : out) v += mean;
  if (gains_out) *gains_out = gains;
  return out;
}

std::vector<Vec3> clean_vector_pair(std::span<const Vec3> b1, std::span<const Vec3> b2, double sample_rate,
                                    bool parallel) {
  if (b1.size() != b2.size()) throw std::invalid_argument("clean_vector_pair: series lengths differ");
  const std::size_t n = b1.size();
  auto axis_job = [&](int axis) {
    std::vector<double> x1(n), x2(n);
    for (std::size_t i = 0; i < n; ++i) {
      x1[i] = b1[i][axis];
      x2[i] = b2[i][axis];
    }
    return clean_channel_pair(x1, x2, sample_rate);
  };
  std::array<std::vector<double>, 3> cleaned;
  if (parallel) {
    std::array<std::future<std::vector<double>>, 3> jobs;
    for (int a = 0; a < 3; ++a) jobs[a] = std::async(std::launch::async, axis_job, a);
    for (int a = 0; a < 3; ++a) cleaned[a] = jobs[a].get();
  } else {
    for (int a = 0; a < 3; ++a) cleaned[a] = axis_job(a);
  }
  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = Vec3{cleaned[0][i], cleaned[1][i], cleaned[2][i]};
  return out;
}

void write_gain_csv(std::ostream& out, const GainProfile& gains, double sample_rate) {
  out << "scale,frequency_hz,k_hat,weight,degenerate\n";
  for (std::size_t j = 0; j < gains.scales.size(); ++j) {
    out << format_double(gains.scales[j]) << ',' << format_double(scale_to_frequency(gains.scales[j], sample_rate))
        << ',' << format_double(gains.k_hat[j]) << ',' << format_double(gains.weight[j]) << ','
        << (gains.degenerate[j] ? 1 : 0) << '\n';
  }
}

}  // namespace uavmag
