#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gowerslab {

/// Unnormalized DFT: X_k = sum_n x_n exp(-2 pi i k n / size) (forward) or
/// with +i (inverse; no 1/size factor). Backed by FFTW; safe to call from
/// several threads.
std::vector<std::complex<double>> dft(std::vector<std::complex<double>> x, bool inverse = false);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

}  // namespace gowerslab
