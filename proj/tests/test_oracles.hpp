#pragma once

// Brute-force references shared by the test suites. These stay independent of
// the library's FFT path: direct O(N^2) transform sums and series evaluation.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "wbsdf/rng.hpp"

namespace oracle_ref {

using cdouble = std::complex<double>;

// Direct DFT: X[k] = sum_n x[n] e^{-i 2 pi k n / N} (times dx when integrating).
inline std::vector<cdouble> dft_direct(const std::vector<cdouble>& x, bool inverse = false) {
    const std::size_t n = x.size();
    std::vector<cdouble> out(n, cdouble(0, 0));
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cdouble acc(0, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const double a = sign * 2.0 * std::numbers::pi * static_cast<double>(k) *
                             static_cast<double>(j) / static_cast<double>(n);
            acc += x[j] * cdouble(std::cos(a), std::sin(a));
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

// Bessel J_q by the ascending power series (adequate for |x| <= 10, |q| <= 40).
inline double bessel_series(int order, double x) {
    const int q = std::abs(order);
    double sign = 1.0;
    if (order < 0 && (q & 1)) sign = -sign;
    if (x < 0.0 && (q & 1)) sign = -sign;
    const double h = 0.5 * std::abs(x);
    double term = 1.0;
    for (int i = 1; i <= q; ++i) term *= h / static_cast<double>(i);
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -h * h / (static_cast<double>(m) * static_cast<double>(m + q));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sign * sum;
}

// Random complex grid with unit-scale entries.
inline std::vector<cdouble> random_complex(std::size_t n, wbsdf::RngStream& rng) {
    std::vector<cdouble> v(n);
    for (auto& s : v) s = cdouble(rng.next_normal(), rng.next_normal());
    return v;
}

}  // namespace oracle_ref
