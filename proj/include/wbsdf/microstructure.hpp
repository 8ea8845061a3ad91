#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wbsdf/complex_grid.hpp"

namespace wbsdf {

// Wavelength in meters; 100 nm .. 10 um accepted (guards unit mistakes).
struct Wavelength {
    double lambda = 0.0;
    void validate() const {
        if (!(lambda >= 100e-9 && lambda <= 10e-6))
            throw ArgumentError("Wavelength: lambda outside [100nm, 10um]");
    }
};

struct SinusoidalGrating {
    double height = 0.0;  // peak-to-peak surface height, meters
    double pitch = 0.0;
};
struct BinaryPhaseGrating {
    double depth = 0.0;   // groove depth, meters
    double pitch = 0.0;
    double duty = 0.5;    // land fraction of a period carrying the raised level
};
struct Slit {
    double width = 0.0;
};
struct DoubleSlit {
    double width = 0.0;
    double separation = 0.0;  // center-to-center
};
struct CircularAperture {
    double radius = 0.0;
};
struct Heightfield {
    std::vector<double> samples;  // meters
    double dx = 0.0;
};
struct Flat {};

enum class SurfaceMode { transmissive, reflective };

// Parametric surface model yielding t(x) = a(x) e^{i Phi(x)} per wavelength.
struct Microstructure {
    std::variant<Flat, SinusoidalGrating, BinaryPhaseGrating, Slit, DoubleSlit,
                 CircularAperture, Heightfield>
        kind;
    SurfaceMode mode = SurfaceMode::reflective;
    std::optional<std::vector<double>> amplitude_mask;  // values in [0,1]
    double refractive_index = 1.5;  // transmissive heightfield phase (n-1)h

    void validate() const;
};

struct GridSpec {
    std::size_t n = 0;
    double dx = 0.0;
    double x0 = 0.0;
};

// Realize the complex transmittance/reflectance on a grid.
// Reflective heightfields: Phi(x) = (2 pi / lambda)(1 + cos theta_i) h(x)
// (tangent-plane). Transmissive: Phi(x) = (2 pi / lambda)(n - 1) h(x).
// Parametric kinds use their analytic phase/amplitude. The grid must resolve
// the finest feature with >= 8 samples per period or a PrecisionError is thrown.
ComplexGrid realize(const Microstructure& s, Wavelength lambda, double theta_i,
                    const GridSpec& grid);

// Peak-to-peak sinusoid height whose realized phase is (m/2) sin(2 pi x / p),
// i.e. the grating with dimensionless phase parameter m at this geometry.
double grating_height_for_phase(double m, double lambda, SurfaceMode mode, double theta_i,
                                double refractive_index = 1.5);

// Unbiased circular sample autocorrelation of a heightfield, normalized so
// R_h(0) = sigma_h^2 (mean removed). A constant heightfield yields sigma_h = 0
// and R_h identically zero.
struct HeightAutocorrelation {
    std::vector<double> r_h;  // meters^2, lag l in samples (circular)
    double sigma_h = 0.0;
};
HeightAutocorrelation autocorrelation_height(const Heightfield& h);

// CSV import, two columns "x_meters,height_meters", uniform spacing required.
Heightfield read_heightfield_csv(const std::string& path);

}  // namespace wbsdf
