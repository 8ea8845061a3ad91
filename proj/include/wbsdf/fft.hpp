#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wbsdf {

using cdouble = std::complex<double>;

bool is_power_of_two(std::size_t n);

// In-place radix-2 DFT, n a power of two.
// Forward: X[k] = sum_n x[n] e^{-i 2 pi k n / N}. Inverse carries the 1/N.
void fft_inplace(cdouble* data, std::size_t n, bool inverse);

std::vector<cdouble> fft(std::vector<cdouble> x);
std::vector<cdouble> ifft(std::vector<cdouble> x);

// Row-column 2D transform of a row-major nx*ny array.
void fft2_inplace(cdouble* data, std::size_t nx, std::size_t ny, bool inverse);

// Signed frequency of DFT bin k on an n-point grid: 0..n/2-1, -n/2..-1.
inline long signed_bin(std::size_t k, std::size_t n) {
    return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace wbsdf
