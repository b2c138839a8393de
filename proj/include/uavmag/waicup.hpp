#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "uavmag/dsp.hpp"
#include "uavmag/vec3.hpp"

namespace uavmag {

/// Per-scale interference gain between the two sensors.
///
/// `weight` is 1 / (k_hat - 1) = <D, W1> / ||D||^2, the coefficient actually
/// used in reconstruction. It stays finite when k_hat blows up (sensor 1 sees
/// no interference at that scale), where the reconstruction tends to W1.
struct GainProfile {
  std::vector<double> scales;
  std::vector<double> k_hat;
  std::vector<double> weight;
  std::vector<bool> degenerate;
};

inline constexpr double kDefaultGainEpsilon = 1e-2;

/// Throws std::invalid_argument on spectra of different shape.
GainProfile estimate_gain(const WaveletSpectrum& w1, const WaveletSpectrum& w2,
                          double epsilon = kDefaultGainEpsilon);

/// X = (K W1 - W2) / (K - 1) on regular scales, (W1 + W2) / 2 on degenerate ones.
WaveletSpectrum reconstruct(const WaveletSpectrum& w1, const WaveletSpectrum& w2, const GainProfile& gains);

/// Full single-channel cleaning: cwt, gain, reconstruct, icwt, restore mean(b1).
/// An empty `scales` selects default_scales(n).
std::vector<double> clean_channel_pair(std::span<const double> b1, std::span<const double> b2, double sample_rate,
                                       std::span<const double> scales = {}, double epsilon = kDefaultGainEpsilon,
                                       GainProfile* gains_out = nullptr);

/// Per-axis cleaning of a vector survey. Axes run concurrently when `parallel`.
std::vector<Vec3> clean_vector_pair(std::span<const Vec3> b1, std::span<const Vec3> b2, double sample_rate,
                                    bool parallel = false);

/// Columns: scale, frequency_hz, k_hat, weight, degenerate.
void write_gain_csv(std::ostream& out, const GainProfile& gains, double sample_rate);

}  // namespace uavmag
