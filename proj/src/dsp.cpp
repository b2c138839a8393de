#include "uavmag/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "uavmag/fft.hpp"

namespace uavmag {

namespace {

using cd = std::complex<double>;

double morlet_hat(double u) {
  if (u <= 0.0) return 0.0;
  const double d = u - kMorletOmega0;
  return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * d * d);
}

// Integral of psi_hat(u) / u over (0, inf), the admissibility constant of the
// delta-function inversion. The integrand is ~1e-8 / u below u = 0.5, so the
// lower cut costs well under 1e-7 relative.
double admissibility_constant() {
  static const double value = [] {
    const double lo = 0.5;
    const double hi = kMorletOmega0 + 14.0;
    const int n = 20000;  // even, Simpson
    const double h = (hi - lo) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double u = lo + h * i;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * morlet_hat(u) / u;
    }
    return sum * h / 3.0;
  }();
  return value;
}

// Weight of each scale in the inversion sum: half the log2 distance to its
// neighbours (dj for a uniform bank).
std::vector<double> log2_weights(std::span<const double> scales) {
  const std::size_t n = scales.size();
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = std::log2(scales[j == 0 ? 0 : j - 1]);
    const double hi = std::log2(scales[j + 1 == n ? n - 1 : j + 1]);
    const double span = (j == 0 || j + 1 == n) ? (hi - lo) : 0.5 * (hi - lo);
    w[j] = span;
  }
  return w;
}

}  // namespace

double morlet_fourier_factor() {
  return 4.0 * std::numbers::pi / (kMorletOmega0 + std::sqrt(2.0 + kMorletOmega0 * kMorletOmega0));
}

double scale_to_frequency(double scale, double sample_rate) { return sample_rate / (morlet_fourier_factor() * scale); }

std::vector<double> default_scales(std::size_t n_samples, int voices_per_octave, double min_period) {
  if (voices_per_octave < 1) throw std::invalid_argument("default_scales: voices_per_octave must be >= 1");
  const double factor = morlet_fourier_factor();
  const double s0 = min_period / factor;
  const double s_max = (static_cast<double>(n_samples) / 4.0) / factor;
  if (!(s_max > s0)) throw std::invalid_argument("default_scales: series too short for the scale bank");
  const auto count = static_cast<std::size_t>(std::floor(std::log2(s_max / s0) * voices_per_octave + 1e-9)) + 1;
  std::vector<double> scales(count);
  for (std::size_t j = 0; j < count; ++j) scales[j] = s0 * std::exp2(static_cast<double>(j) / voices_per_octave);
  return scales;
}

WaveletSpectrum cwt(std::span<const double> signal, std::span<const double> scales, double sample_rate) {
  const std::size_t n = signal.size();
  if (n < 4) throw std::invalid_argument("cwt: signal needs at least 4 samples");
  if (scales.empty()) throw std::invalid_argument("cwt: empty scale list");
  for (std::size_t j = 0; j < scales.size(); ++j) {
    if (!(scales[j] > 1.0) || !(scales[j] < 0.5 * static_cast<double>(n)))
      throw std::invalid_argument("cwt: scales must lie in (1, n/2)");
    if (j > 0 && !(scales[j] > scales[j - 1])) throw std::invalid_argument("cwt: scales must be strictly increasing");
  }
  if (!std::all_of(signal.begin(), signal.end(), [](double v) { return std::isfinite(v); }))
    throw std::invalid_argument("cwt: non-finite sample");

  const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(n);
  // Half the Morlet support is taken as 4 s; the envelope there is below 4e-4.
  const auto pad = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::ceil(4.0 * scales.back())));
  const std::size_t m = fft::good_size(n + 2 * pad);

  std::vector<cd> spectrum(m, cd{});
  for (std::size_t i = 0; i < pad; ++i) spectrum[pad - 1 - i] = signal[i] - mean;
  for (std::size_t i = 0; i < n; ++i) spectrum[pad + i] = signal[i] - mean;
  for (std::size_t i = 0; i < pad; ++i) spectrum[pad + n + i] = signal[n - 1 - i] - mean;
  fft::forward(spectrum);

  WaveletSpectrum out;
  out.scales.assign(scales.begin(), scales.end());
  out.n_samples = n;
  out.sample_rate = sample_rate;
  out.coefficients.resize(scales.size() * n);

  std::vector<double> omega(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double kk = (2 * k <= m) ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(m);
    omega[k] = 2.0 * std::numbers::pi * kk / static_cast<double>(m);
  }

  std::vector<cd> work(m);
  for (std::size_t j = 0; j < scales.size(); ++j) {
    const double s = scales[j];
    const double norm = std::sqrt(2.0 * std::numbers::pi * s) / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) work[k] = spectrum[k] * (norm * morlet_hat(s * omega[k]));
    fft::inverse(work);
    std::copy(work.begin() + static_cast<std::ptrdiff_t>(pad), work.begin() + static_cast<std::ptrdiff_t>(pad + n),
              out.row(j).begin());
  }
  return out;
}

std::vector<double> icwt(const WaveletSpectrum& spectrum) {
  std::vector<double> out(spectrum.n_samples, 0.0);
  if (spectrum.scales.empty()) return out;
  const auto weights = log2_weights(spectrum.scales);
  const double factor = 2.0 * std::numbers::ln2 / (std::sqrt(2.0 * std::numbers::pi) * admissibility_constant());
  for (std::size_t j = 0; j < spectrum.n_scales(); ++j) {
    const double w = factor * weights[j] / std::sqrt(spectrum.scales[j]);
    const auto row = spectrum.row(j);
    for (std::size_t i = 0; i < spectrum.n_samples; ++i) out[i] += w * row[i].real();
  }
  return out;
}

std::vector<Biquad> butterworth_lowpass(int order, double cutoff, double sample_rate) {
  if (order < 1) throw std::invalid_argument("butterworth_lowpass: order must be >= 1");
  if (!(cutoff > 0.0) || !(cutoff < 0.5 * sample_rate))
    throw std::invalid_argument("lowpass: cutoff must satisfy 0 < cutoff < sample_rate / 2");
  const double fs2 = 2.0 * sample_rate;
  const double warped = fs2 * std::tan(std::numbers::pi * cutoff / sample_rate);
  std::vector<Biquad> sections;
  // Conjugate pole pairs of the analog prototype, mapped by the bilinear
  // transform; zeros all sit at z = -1.
  for (int k = 0; k < order / 2; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1.0) / (2.0 * order);
    const cd s = warped * cd{std::cos(theta), std::sin(theta)};
    const cd z = (fs2 + s) / (fs2 - s);
    const double a1 = -2.0 * z.real();
    const double a2 = std::norm(z);
    const double g = (1.0 + a1 + a2) / 4.0;
    sections.push_back(Biquad{g, 2.0 * g, g, a1, a2});
  }
  if (order % 2 == 1) {
    const double s = -warped;
    const double z = (fs2 + s) / (fs2 - s);
    const double g = (1.0 - z) / 2.0;
    sections.push_back(Biquad{g, g, 0.0, -z, 0.0});
  }
  return sections;
}

std::vector<double> sos_filter(std::span<const Biquad> sections, std::span<const double> signal) {
  std::vector<double> y(signal.begin(), signal.end());
  if (y.empty()) return y;
  for (const auto& sec : sections) {
    // Transposed direct form II, initialised at the steady state of a
    // constant input y[0].
    const double gain = (sec.b0 + sec.b1 + sec.b2) / (1.0 + sec.a1 + sec.a2);
    const double x0 = y[0];
    double z2 = (sec.b2 - sec.a2 * gain) * x0;
    double z1 = (sec.b1 - sec.a1 * gain) * x0 + z2;
    for (double& v : y) {
      const double x = v;
      const double out = sec.b0 * x + z1;
      z1 = sec.b1 * x - sec.a1 * out + z2;
      z2 = sec.b2 * x - sec.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> lowpass(std::span<const double> signal, double cutoff, double sample_rate, int order) {
  const auto sections = butterworth_lowpass(order, cutoff, sample_rate);
  const std::size_t n = signal.size();
  if (n == 0) return {};
  if (!std::all_of(signal.begin(), signal.end(), [](double v) { return std::isfinite(v); }))
    throw std::invalid_argument("lowpass: non-finite sample");
  // Odd extension over a few filter time constants suppresses edge transients.
  const auto wanted = static_cast<std::size_t>(std::ceil(3.0 * sample_rate / cutoff));
  const std::size_t pad = std::min(n - 1, wanted);
  std::vector<double> ext(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) ext[i] = 2.0 * signal[0] - signal[pad - i];
  std::copy(signal.begin(), signal.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
  for (std::size_t i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * signal[n - 1] - signal[n - 2 - i];

  auto forward = sos_filter(sections, ext);
  std::reverse(forward.begin(), forward.end());
  auto backward = sos_filter(sections, forward);
  std::reverse(backward.begin(), backward.end());
  return {backward.begin() + static_cast<std::ptrdiff_t>(pad), backward.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace uavmag
