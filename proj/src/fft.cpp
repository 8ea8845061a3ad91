#include "wbsdf/fft.hpp"

#include <cmath>
#include <numbers>

#include "wbsdf/errors.hpp"

namespace wbsdf {

bool is_power_of_two(std::size_t n) {
    return n >= 1 && (n & (n - 1)) == 0;
}

void fft_inplace(cdouble* data, std::size_t n, bool inverse) {
    if (!is_power_of_two(n))
        throw ArgumentError("fft: length must be a power of two, got " + std::to_string(n));
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cdouble wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cdouble u = data[i + k];
                cdouble v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) data[i] *= inv;
    }
}

std::vector<cdouble> fft(std::vector<cdouble> x) {
    fft_inplace(x.data(), x.size(), false);
    return x;
}

std::vector<cdouble> ifft(std::vector<cdouble> x) {
    fft_inplace(x.data(), x.size(), true);
    return x;
}

void fft2_inplace(cdouble* data, std::size_t nx, std::size_t ny, bool inverse) {
    for (std::size_t i = 0; i < nx; ++i) fft_inplace(data + i * ny, ny, inverse);
    std::vector<cdouble> col(nx);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) col[i] = data[i * ny + j];
        fft_inplace(col.data(), nx, inverse);
        for (std::size_t i = 0; i < nx; ++i) data[i * ny + j] = col[i];
    }
}

}  // namespace wbsdf
