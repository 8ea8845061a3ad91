#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "wbsdf/errors.hpp"
#include "wbsdf/fft.hpp"

namespace wbsdf {

// Uniformly sampled complex surface field t(x). N is a power of two; dx is
// the sample pitch in meters; x0 the coordinate of sample 0.
struct ComplexGrid {
    std::vector<cdouble> samples;
    double dx = 0.0;
    double x0 = 0.0;

    std::size_t size() const { return samples.size(); }
    double x_at(std::size_t n) const { return x0 + static_cast<double>(n) * dx; }
    double extent() const { return static_cast<double>(samples.size()) * dx; }

    void validate() const {
        if (samples.size() < 2 || !is_power_of_two(samples.size()))
            throw ArgumentError("ComplexGrid: N must be a power of two >= 2");
        if (!(dx > 0.0)) throw ArgumentError("ComplexGrid: dx must be > 0");
        for (const cdouble& s : samples)
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                throw DataError("ComplexGrid: non-finite sample");
    }
};

// Separable-friendly 2D field t(x, y), row-major with x as the outer index.
struct ComplexGrid2D {
    std::vector<cdouble> samples;  // nx * ny
    std::size_t nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;
    double x0 = 0.0, y0 = 0.0;

    cdouble at(std::size_t ix, std::size_t iy) const { return samples[ix * ny + iy]; }

    void validate() const {
        if (nx < 2 || ny < 2 || !is_power_of_two(nx) || !is_power_of_two(ny))
            throw ArgumentError("ComplexGrid2D: dimensions must be powers of two >= 2");
        if (samples.size() != nx * ny) throw ArgumentError("ComplexGrid2D: size mismatch");
        if (!(dx > 0.0) || !(dy > 0.0)) throw ArgumentError("ComplexGrid2D: pitch must be > 0");
        for (const cdouble& s : samples)
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                throw DataError("ComplexGrid2D: non-finite sample");
    }
};

// Spatial frequency u = sin(theta)/lambda in cycles per meter.
struct SpatialFrequency {
    double u = 0.0;
    double v = 0.0;  // second axis, used by separable 2D tables

    // |u*lambda| <= 1 is required for a propagating direction.
    bool propagating(double lambda) const { return std::abs(u * lambda) <= 1.0; }

    double to_sin_theta(double lambda) const {
        const double s = u * lambda;
        if (std::abs(s) > 1.0)
            throw ArgumentError("SpatialFrequency: evanescent (|u*lambda| > 1)");
        return s;
    }
};

inline SpatialFrequency frequency_of_direction(double theta, double lambda) {
    return SpatialFrequency{std::sin(theta) / lambda, 0.0};
}

}  // namespace wbsdf
