#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace uavmag::fft {

/// In-place complex DFT (unnormalized in both directions, FFTW convention).
void forward(std::span<std::complex<double>> data);
void inverse(std::span<std::complex<double>> data);

/// Smallest n' >= n whose only prime factors are 2, 3 and 5.
std::size_t good_size(std::size_t n);

}  // namespace uavmag::fft
