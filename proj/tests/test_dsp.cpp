#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "uavmag/dsp.hpp"

using namespace uavmag;

namespace {

double rel_l2(const std::vector<double>& got, const std::vector<double>& want, std::size_t skip = 0) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = skip; i + skip < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

std::vector<double> tones(std::size_t n, double fs, const std::vector<double>& freqs, double offset = 0.0) {
  std::vector<double> x(n, offset);
  for (std::size_t k = 0; k < freqs.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      x[i] += (1.0 + 0.3 * static_cast<double>(k)) *
              std::sin(2.0 * std::numbers::pi * freqs[k] * static_cast<double>(i) / fs + 0.7 * static_cast<double>(k));
  return x;
}

// Whole numbers of half cycles over the record: these continue smoothly
// across the reflection padding, so the transform sees no edge kink.
std::vector<double> half_cycle_tones(std::size_t n, double fs, const std::vector<double>& freqs, double offset = 0.0) {
  std::vector<double> x(n, offset);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const double cycles = std::round(2.0 * static_cast<double>(n) * freqs[k] / fs);
    for (std::size_t i = 0; i < n; ++i)
      x[i] += (1.0 + 0.3 * static_cast<double>(k)) *
              std::cos(std::numbers::pi * cycles * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  return x;
}

double amplitude(const std::vector<double>& x, std::size_t from, std::size_t to) {
  double peak = 0.0;
  for (std::size_t i = from; i < to; ++i) peak = std::max(peak, std::abs(x[i]));
  return peak;
}

}  // namespace

TEST_CASE("default scale bank") {
  const auto s = default_scales(11000);
  CHECK(s.front() * morlet_fourier_factor() == doctest::Approx(4.0));
  CHECK(s.back() * morlet_fourier_factor() <= 11000.0 / 4.0 + 1e-9);
  CHECK(s.back() * morlet_fourier_factor() * std::exp2(1.0 / 8.0) > 11000.0 / 4.0);
  for (std::size_t j = 1; j < s.size(); ++j) CHECK(s[j] / s[j - 1] == doctest::Approx(std::exp2(1.0 / 8.0)));
  // The bank spans the interference band and the slow mine signatures.
  CHECK(scale_to_frequency(s.front(), 100.0) >= 2.0);
  CHECK(scale_to_frequency(s.back(), 100.0) <= 0.05);
  CHECK(morlet_fourier_factor() == doctest::Approx(1.0330436));
}

TEST_CASE("cwt rejects bad input") {
  const std::vector<double> x(64, 1.0);
  const std::vector<double> ok{2.0, 3.0};
  CHECK_THROWS_AS(cwt(x, std::vector<double>{}, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(cwt(x, std::vector<double>{3.0, 2.0}, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(cwt(x, std::vector<double>{40.0}, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(cwt(std::vector<double>{1, 2, 3}, ok, 100.0), std::invalid_argument);
  auto bad = x;
  bad[10] = std::nan("");
  CHECK_THROWS_AS(cwt(bad, ok, 100.0), std::invalid_argument);
}

TEST_CASE("cwt of zero is zero and icwt of zero is zero") {
  const std::vector<double> x(500, 0.0);
  const auto w = cwt(x, default_scales(500), 100.0);
  for (const auto& c : w.coefficients) CHECK(std::abs(c) == 0.0);
  for (double v : icwt(w)) CHECK(v == 0.0);
}

TEST_CASE("cwt is linear") {
  oracle::Draws d(3);
  std::vector<double> x(2048);
  std::vector<double> y(2048);
  for (auto& v : x) v = d.normal();
  for (auto& v : y) v = d.normal();
  const double a = 2.5;
  const double b = -0.75;
  std::vector<double> z(2048);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
  const auto scales = default_scales(2048);
  const auto wx = cwt(x, scales, 100.0);
  const auto wy = cwt(y, scales, 100.0);
  const auto wz = cwt(z, scales, 100.0);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < wz.coefficients.size(); ++k) {
    num += std::norm(wz.coefficients[k] - (a * wx.coefficients[k] + b * wy.coefficients[k]));
    den += std::norm(wz.coefficients[k]);
  }
  CHECK(std::sqrt(num / den) <= 1e-10);

  const auto rx = icwt(wx);
  const auto ry = icwt(wy);
  const auto rz = icwt(wz);
  for (std::size_t i = 0; i < rz.size(); i += 17) CHECK(rz[i] == doctest::Approx(a * rx[i] + b * ry[i]).epsilon(1e-9));
}

TEST_CASE("cwt peaks at the scale matching a sinusoid") {
  const double fs = 100.0;
  const std::size_t n = 8000;
  const auto scales = default_scales(n);
  for (double f : {0.1, 0.39, 1.0, 2.0, 5.0}) {
    const auto x = tones(n, fs, {f});
    const auto w = cwt(x, scales, fs);
    std::size_t best = 0;
    double best_power = -1.0;
    for (std::size_t j = 0; j < w.n_scales(); ++j) {
      double p = 0.0;
      const auto row = w.row(j);
      for (std::size_t i = n / 4; i < 3 * n / 4; ++i) p += std::norm(row[i]);
      // Power per unit scale normalised so a pure tone peaks at its own scale.
      p /= scales[j];
      if (p > best_power) {
        best_power = p;
        best = j;
      }
    }
    // Scale whose Morlet Fourier period matches 1/f.
    const double expected = fs / (f * morlet_fourier_factor());
    const double bins = std::abs(std::log2(scales[best] / expected)) * 8.0;
    CHECK(bins <= 1.0);
  }
}

TEST_CASE("cwt/icwt round trip on in-band multitones") {
  const double fs = 100.0;
  SUBCASE("interference band 0.05 to 2 Hz") {
    const std::size_t n = 40000;
    const auto x = half_cycle_tones(n, fs, {0.05, 0.13, 0.39, 0.9, 2.0}, 7.0);
    const auto w = cwt(x, default_scales(n), fs);
    const auto r = icwt(w);
    std::vector<double> centred(x);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (auto& v : centred) v -= mean;
    CHECK(rel_l2(r, centred) <= 0.02);
    // Energy consistency.
    const double e_in = std::inner_product(centred.begin(), centred.end(), centred.begin(), 0.0);
    const double e_out = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    CHECK(std::abs(e_out / e_in - 1.0) <= 0.05);
  }
  SUBCASE("arbitrary phases away from the edges") {
    // A sine cut at an arbitrary phase reflects with a kink whose energy
    // partly falls below the lowest scale; that loss stays near the ends.
    const std::size_t n = 40000;
    const auto x = tones(n, fs, {0.05, 0.13, 0.39, 0.9, 2.0}, 7.0);
    const auto r = icwt(cwt(x, default_scales(n), fs));
    std::vector<double> centred(x);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (auto& v : centred) v -= mean;
    CHECK(rel_l2(r, centred, n / 10) <= 0.02);
  }
  SUBCASE("band-limited random signal") {
    const std::size_t n = 11000;
    oracle::Draws d(17);
    std::vector<double> freqs;
    for (int k = 0; k < 12; ++k) freqs.push_back(0.1 + 4.0 * d.uniform());
    const auto x = tones(n, fs, freqs);
    const auto r = icwt(cwt(x, default_scales(n), fs));
    std::vector<double> centred(x);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (auto& v : centred) v -= mean;
    CHECK(rel_l2(r, centred) <= 0.02);
  }
}

TEST_CASE("Butterworth sections") {
  const auto sec = butterworth_lowpass(4, 0.5, 100.0);
  REQUIRE(sec.size() == 2);
  // Unit DC gain.
  double dc = 1.0;
  for (const auto& s : sec) dc *= (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  CHECK(dc == doctest::Approx(1.0).epsilon(1e-12));
  // Bilinear prewarping pins -3 dB exactly at the cutoff.
  const double w = 2.0 * std::numbers::pi * 0.5 / 100.0;
  std::complex<double> h = 1.0;
  const std::complex<double> z1 = std::polar(1.0, -w);
  for (const auto& s : sec) h *= (s.b0 + s.b1 * z1 + s.b2 * z1 * z1) / (1.0 + s.a1 * z1 + s.a2 * z1 * z1);
  CHECK(std::abs(h) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(butterworth_lowpass(3, 0.5, 100.0).size() == 2);
}

TEST_CASE("lowpass analytic response") {
  const double fs = 100.0;
  const std::size_t n = 20000;

  SUBCASE("constant passes unchanged") {
    const std::vector<double> x(1000, 123.456);
    for (double v : lowpass(x, 0.5, fs)) CHECK(std::abs(v - 123.456) <= 1e-9);
  }
  SUBCASE("stopband at 5 Hz") {
    const auto x = tones(n, fs, {5.0});
    const auto y = lowpass(x, 0.5, fs);
    const double gain = amplitude(y, n / 4, 3 * n / 4) / amplitude(x, n / 4, 3 * n / 4);
    const double analytic = std::pow(oracle::butterworth_gain(5.0, 0.5, 4), 2);
    CHECK(20.0 * std::log10(gain) <= -60.0);
    CHECK(gain <= 2.0 * analytic);
  }
  SUBCASE("passband at 0.05 Hz") {
    const auto x = tones(n, fs, {0.05});
    const auto y = lowpass(x, 0.5, fs);
    const double gain = amplitude(y, n / 4, 3 * n / 4) / amplitude(x, n / 4, 3 * n / 4);
    CHECK(std::abs(gain - 1.0) <= 0.02);
    CHECK(gain == doctest::Approx(std::pow(oracle::butterworth_gain(0.05, 0.5, 4), 2)).epsilon(1e-3));
  }
  SUBCASE("transition band follows the squared magnitude") {
    for (double f : {0.3, 0.5, 0.8}) {
      const auto x = tones(n, fs, {f});
      const auto y = lowpass(x, 0.5, fs);
      const double gain = amplitude(y, n / 4, 3 * n / 4) / amplitude(x, n / 4, 3 * n / 4);
      // Prewarped bilinear design; the analog prototype is within 1e-3 here.
      CHECK(gain == doctest::Approx(std::pow(oracle::butterworth_gain(f, 0.5, 4), 2)).epsilon(5e-3));
    }
  }
  SUBCASE("zero phase") {
    const auto x = tones(n, fs, {0.2});
    const auto y = lowpass(x, 0.5, fs);
    // Peak positions coincide.
    std::size_t px = n / 2;
    std::size_t py = n / 2;
    for (std::size_t i = n / 2; i < n / 2 + 500; ++i) {
      if (x[i] > x[px]) px = i;
      if (y[i] > y[py]) py = i;
    }
    CHECK(px == py);
  }
  SUBCASE("idempotent for in-band input") {
    const auto x = tones(n, fs, {0.02, 0.07});
    const auto y = lowpass(x, 0.5, fs);
    const auto yy = lowpass(y, 0.5, fs);
    CHECK(rel_l2(yy, y, 1000) <= 1e-3);
  }
  SUBCASE("invalid cutoff") {
    const std::vector<double> x(100, 1.0);
    CHECK_THROWS_AS(lowpass(x, 0.0, fs), std::invalid_argument);
    CHECK_THROWS_AS(lowpass(x, -1.0, fs), std::invalid_argument);
    CHECK_THROWS_AS(lowpass(x, 50.0, fs), std::invalid_argument);
    CHECK_THROWS_AS(lowpass(x, 80.0, fs), std::invalid_argument);
  }
}
