#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace uavmag {

/// Complex Morlet coefficients over (scale, time) for one real channel.
/// Scales are in samples; row i of `coefficients` belongs to scales[i].
struct WaveletSpectrum {
  std::vector<double> scales;
  std::size_t n_samples = 0;
  double sample_rate = 1.0;
  std::vector<std::complex<double>> coefficients;

  [[nodiscard]] std::size_t n_scales() const { return scales.size(); }
  [[nodiscard]] std::span<const std::complex<double>> row(std::size_t scale_index) const {
    return {coefficients.data() + scale_index * n_samples, n_samples};
  }
  [[nodiscard]] std::span<std::complex<double>> row(std::size_t scale_index) {
    return {coefficients.data() + scale_index * n_samples, n_samples};
  }
  [[nodiscard]] bool same_shape(const WaveletSpectrum& other) const {
    return n_samples == other.n_samples && scales == other.scales;
  }
};

inline constexpr double kMorletOmega0 = 6.0;

/// Fourier period of a Morlet wavelet divided by its scale (~1.033 for omega0 = 6).
double morlet_fourier_factor();

/// Centre frequency (Hz) of a scale given in samples.
double scale_to_frequency(double scale, double sample_rate);

/// Logarithmic bank, `voices_per_octave` per octave, from `min_period`
/// samples up to a period of n_samples / 4.
std::vector<double> default_scales(std::size_t n_samples, int voices_per_octave = 8, double min_period = 4.0);

/// Morlet CWT by frequency-domain convolution on a symmetrically padded,
/// mean-removed copy of the signal. Throws std::invalid_argument on an empty
/// or non-increasing scale list, scales outside (1, n/2), fewer than 4
/// samples, or non-finite input.
WaveletSpectrum cwt(std::span<const double> signal, std::span<const double> scales, double sample_rate);

/// Single-integral (delta-function) Morlet inversion. The result has zero mean
/// content below the lowest represented frequency; callers restore the mean.
std::vector<double> icwt(const WaveletSpectrum& spectrum);

/// Zero-phase Butterworth low-pass: `order` per pass, run forward then backward.
/// Throws std::invalid_argument unless 0 < cutoff < sample_rate / 2.
std::vector<double> lowpass(std::span<const double> signal, double cutoff, double sample_rate, int order = 4);

/// Second-order sections (b0 b1 b2 a1 a2, a0 = 1) of a digital Butterworth
/// low-pass designed with the prewarped bilinear transform. Odd orders get a
/// first-order section with b2 = a2 = 0.
struct Biquad {
  double b0, b1, b2, a1, a2;
};
std::vector<Biquad> butterworth_lowpass(int order, double cutoff, double sample_rate);

/// Single forward pass of a section cascade, starting from the steady state
/// for a constant input equal to signal[0].
std::vector<double> sos_filter(std::span<const Biquad> sections, std::span<const double> signal);

}  // namespace uavmag
