#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "uavmag/dsp.hpp"
#include "uavmag/metrics.hpp"
#include "uavmag/scenario.hpp"
#include "uavmag/waicup.hpp"

using namespace uavmag;

namespace {

constexpr double kFs = 100.0;

std::vector<double> tone(std::size_t n, double f, double amp, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * f * i / kFs + phase);
  return x;
}

std::vector<double> add(std::vector<double> a, const std::vector<double>& b, double k = 1.0) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += k * b[i];
  return a;
}

double rel_l2(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

double mean(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); }

// Cosine with a whole number of half cycles over the record, nearest to f.
// It continues smoothly across the half-sample reflection used for padding,
// so two such tones far apart in frequency stay disjoint in the wavelet domain.
std::vector<double> half_cycle_tone(std::size_t n, double f, double amp) {
  const double k = std::round(2.0 * static_cast<double>(n) * f / kFs);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::cos(std::numbers::pi * k * (i + 0.5) / n);
  return x;
}

// Slow ambient signal: two low tones. Interference: two fast tones.
std::vector<double> ambient(std::size_t n) { return add(half_cycle_tone(n, 0.06, 40.0), half_cycle_tone(n, 0.11, 25.0)); }
std::vector<double> interference(std::size_t n) {
  return add(half_cycle_tone(n, 2.0, 300.0), half_cycle_tone(n, 3.1, 150.0));
}

}  // namespace

TEST_CASE("gain of a pure interference pair") {
  const std::size_t n = 4000;
  const auto a = tone(n, 2.0, 100.0);
  const auto scales = default_scales(n);
  const auto w1 = cwt(a, scales, kFs);
  const auto w2 = cwt(add(a, a), scales, kFs);
  const auto g = estimate_gain(w1, w2);
  std::size_t energetic = 0;
  for (std::size_t j = 0; j < g.scales.size(); ++j) {
    double e = 0.0;
    for (const auto& c : w1.row(j)) e += std::norm(c);
    if (e < 1e-6 * n) continue;
    ++energetic;
    CHECK_FALSE(g.degenerate[j]);
    CHECK(g.k_hat[j] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.weight[j] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(energetic > 10);
}

TEST_CASE("identical inputs are degenerate at every scale") {
  const std::size_t n = 11000;
  const auto x = add(ambient(n), interference(n));
  const auto scales = default_scales(n);
  const auto w = cwt(x, scales, kFs);
  const auto g = estimate_gain(w, w);
  for (bool d : g.degenerate) CHECK(d);
  const auto out = clean_channel_pair(x, x, kFs);
  const auto rho = pearson(out, x);
  CHECK(rho.value >= 0.999);
}

TEST_CASE("gain estimate of a noisy K = 3 mixture") {
  const std::size_t n = 11000;
  const auto x = tone(n, 0.02, 300.0);
  const auto a = tone(n, 2.0, 300.0);
  oracle::Draws d(41);
  auto b1 = add(x, a);
  auto b2 = add(x, a, 3.0);
  // 40 dB below the interference amplitude.
  for (auto& v : b1) v += 3.0 * d.normal() / std::sqrt(2.0);
  for (auto& v : b2) v += 3.0 * d.normal() / std::sqrt(2.0);
  GainProfile g;
  clean_channel_pair(b1, b2, kFs, {}, kDefaultGainEpsilon, &g);
  int checked = 0;
  for (std::size_t j = 0; j < g.scales.size(); ++j) {
    const double f = scale_to_frequency(g.scales[j], kFs);
    if (f < 1.6 || f > 2.5) continue;
    ++checked;
    CHECK(g.k_hat[j] == doctest::Approx(3.0).epsilon(0.01));
  }
  CHECK(checked >= 3);
}

TEST_CASE("reconstruction algebra") {
  const std::size_t n = 2000;
  const auto scales = default_scales(n);
  const auto wx = cwt(ambient(n), scales, kFs);
  const auto wa = cwt(interference(n), scales, kFs);
  WaveletSpectrum w1 = wx;
  WaveletSpectrum w2 = wx;
  for (std::size_t k = 0; k < wx.coefficients.size(); ++k) {
    w1.coefficients[k] += wa.coefficients[k];
    w2.coefficients[k] += 2.0 * wa.coefficients[k];
  }
  GainProfile g;
  g.scales = scales;
  g.k_hat.assign(scales.size(), 2.0);
  g.weight.assign(scales.size(), 1.0);
  g.degenerate.assign(scales.size(), false);
  const auto xhat = reconstruct(w1, w2, g);
  for (std::size_t k = 0; k < wx.coefficients.size(); k += 7)
    CHECK(std::abs(xhat.coefficients[k] - wx.coefficients[k]) <= 1e-9 * (1.0 + std::abs(wx.coefficients[k])));

  g.degenerate.assign(scales.size(), true);
  const auto avg = reconstruct(w1, w2, g);
  for (std::size_t k = 0; k < wx.coefficients.size(); k += 7)
    CHECK(std::abs(avg.coefficients[k] - 0.5 * (w1.coefficients[k] + w2.coefficients[k])) <= 1e-12);

  WaveletSpectrum other = w1;
  other.scales.pop_back();
  CHECK_THROWS_AS(estimate_gain(w1, other), std::invalid_argument);
}

TEST_CASE("exact recovery of spectrally disjoint mixtures") {
  const std::size_t n = 11000;
  const auto x = ambient(n);
  const auto a = interference(n);
  const auto scales = default_scales(n);
  // Reference passes through the same transform pair.
  auto ref = icwt(cwt(x, scales, kFs));
  for (double k : {0.5, 2.0, 3.0, 10.0}) {
    CAPTURE(k);
    const auto b1 = add(x, a);
    const auto b2 = add(x, a, k);
    auto out = clean_channel_pair(b1, b2, kFs);
    const double m = mean(b1);
    for (auto& v : out) v -= m;
    CHECK(rel_l2(out, ref) <= 1e-3);
    // Against the raw signal the transform's own round-trip error remains.
    std::vector<double> centred(x);
    const double mx = mean(x);
    for (auto& v : centred) v -= mx;
    CHECK(rel_l2(out, centred) <= 0.02);
    CHECK(pearson(out, x).value >= 0.999);
  }
}

TEST_CASE("unit gain returns the averaged inputs") {
  const std::size_t n = 5000;
  const auto x = ambient(n);
  const auto a = interference(n);
  const auto b1 = add(x, a);
  const auto b2 = add(x, a);  // K = 1: no differential interference
  auto out = clean_channel_pair(b1, b2, kFs);
  const auto avg_spec = icwt(cwt(b1, default_scales(n), kFs));
  for (std::size_t i = 0; i < n; ++i) {
    REQUIRE(std::isfinite(out[i]));
    CHECK(out[i] - mean(b1) == doctest::Approx(avg_spec[i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("pure ambient input passes through") {
  const std::size_t n = 11000;
  const auto x = ambient(n);
  const auto out = clean_channel_pair(x, x, kFs);
  CHECK(pearson(out, x).value >= 0.999);
}

TEST_CASE("cleaning scales with its input and never produces NaN") {
  const std::size_t n = 4000;
  oracle::Draws d(5);
  auto b1 = add(ambient(n), interference(n));
  auto b2 = add(ambient(n), interference(n), 2.5);
  for (auto& v : b1) v += d.normal();
  for (auto& v : b2) v += d.normal();
  const auto out = clean_channel_pair(b1, b2, kFs);
  std::vector<double> s1(b1);
  std::vector<double> s2(b2);
  for (auto& v : s1) v *= 7.5;
  for (auto& v : s2) v *= 7.5;
  const auto scaled = clean_channel_pair(s1, s2, kFs);
  for (std::size_t i = 0; i < n; ++i) {
    REQUIRE(std::isfinite(out[i]));
    CHECK(scaled[i] == doctest::Approx(7.5 * out[i]).epsilon(1e-9).scale(1.0));
  }

  // Sensor 1 free of interference at some scales: gain is infinite there.
  const auto only2 = clean_channel_pair(ambient(n), b2, kFs);
  for (double v : only2) REQUIRE(std::isfinite(v));
  const std::vector<double> zeros(n, 0.0);
  for (double v : clean_channel_pair(zeros, zeros, kFs)) CHECK(v == 0.0);
}

TEST_CASE("simulated survey without mines is cleaned to the noise floor") {
  ScenarioParams p;
  auto s = generate_random_scenario(12, 3, p);
  s.mines.clear();
  const auto rec = simulate(s);
  const auto cleaned = clean_vector_pair(rec.b1, rec.b2, rec.sample_rate);
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> v(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) v[i] = cleaned[i][axis];
    const double m = mean(v);
    double sq = 0.0;
    for (double e : v) sq += (e - m) * (e - m);
    CHECK(std::sqrt(sq / v.size()) <= 3.0 * p.noise_sigma);
  }
}

TEST_CASE("per-axis cleaning tracks the truth in either sensor order") {
  const auto s = generate_random_scenario(31, 4);
  const auto rec = simulate(s);
  const auto forward = clean_vector_pair(rec.b1, rec.b2, rec.sample_rate, true);
  const auto serial = clean_vector_pair(rec.b1, rec.b2, rec.sample_rate, false);
  bool same = true;
  for (std::size_t i = 0; i < rec.size(); ++i) same = same && forward[i] == serial[i];
  CHECK(same);

  std::vector<double> got(rec.size());
  std::vector<double> truth(rec.size());
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      got[i] = forward[i][axis];
      truth[i] = rec.truth1[i][axis];
    }
    // Sensor noise of 10 nT caps the weaker horizontal axes near 0.95.
    CHECK(pearson(got, truth).value >= 0.90);
  }

  const auto quiet = simulate_noise_free(s);
  const auto cleaned = clean_vector_pair(quiet.b1, quiet.b2, quiet.sample_rate);
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      got[i] = cleaned[i][axis];
      truth[i] = quiet.truth1[i][axis];
    }
    CHECK(pearson(got, truth).value >= 0.95);
  }

  // Swapping the sensor labels still tracks the truth.
  const auto swapped = clean_vector_pair(rec.b2, rec.b1, rec.sample_rate);
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      got[i] = swapped[i][axis];
      truth[i] = rec.truth1[i][axis];
    }
    CHECK(pearson(got, truth).value >= 0.90);
  }
}

TEST_CASE("gain CSV layout") {
  const std::size_t n = 1000;
  const auto x = interference(n);
  GainProfile g;
  clean_channel_pair(x, add(x, x), kFs, {}, kDefaultGainEpsilon, &g);
  std::stringstream ss;
  write_gain_csv(ss, g, kFs);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "scale,frequency_hz,k_hat,weight,degenerate");
  std::size_t rows = 0;
  for (std::string line; std::getline(ss, line);) ++rows;
  CHECK(rows == g.scales.size());
}
