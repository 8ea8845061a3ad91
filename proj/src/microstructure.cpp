#include "wbsdf/microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace wbsdf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ArgumentError(std::string("Microstructure: ") + what + " must be > 0");
}

}  // namespace

void Microstructure::validate() const {
    std::visit(
        [](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SinusoidalGrating>) {
                require_positive(k.height, "grating height");
                require_positive(k.pitch, "grating pitch");
            } else if constexpr (std::is_same_v<T, BinaryPhaseGrating>) {
                require_positive(k.depth, "groove depth");
                require_positive(k.pitch, "grating pitch");
                if (!(k.duty > 0.0 && k.duty < 1.0))
                    throw ArgumentError("Microstructure: duty cycle must lie in (0,1)");
            } else if constexpr (std::is_same_v<T, Slit>) {
                require_positive(k.width, "slit width");
            } else if constexpr (std::is_same_v<T, DoubleSlit>) {
                require_positive(k.width, "slit width");
                require_positive(k.separation, "slit separation");
                if (k.separation <= k.width)
                    throw ArgumentError("Microstructure: slit separation must exceed width");
            } else if constexpr (std::is_same_v<T, CircularAperture>) {
                require_positive(k.radius, "aperture radius");
            } else if constexpr (std::is_same_v<T, Heightfield>) {
                require_positive(k.dx, "heightfield dx");
                if (k.samples.empty()) throw ArgumentError("Microstructure: empty heightfield");
                for (double h : k.samples)
                    if (!std::isfinite(h)) throw DataError("Microstructure: non-finite height");
            }
        },
        kind);
    if (amplitude_mask) {
        for (double a : *amplitude_mask)
            if (!(a >= 0.0 && a <= 1.0))
                throw ArgumentError("Microstructure: amplitude mask values must lie in [0,1]");
    }
}

double grating_height_for_phase(double m, double lambda, SurfaceMode mode, double theta_i,
                                double refractive_index) {
    const double scale = mode == SurfaceMode::reflective
                             ? (kTwoPi / lambda) * (1.0 + std::cos(theta_i))
                             : (kTwoPi / lambda) * (refractive_index - 1.0);
    return m / scale;
}

namespace {

// Finest spatial period of the structure, used by the >=8 samples/period rule.
double finest_period(const Microstructure& s) {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SinusoidalGrating>) return k.pitch;
            else if constexpr (std::is_same_v<T, BinaryPhaseGrating>) return k.pitch;
            else if constexpr (std::is_same_v<T, Slit>) return k.width;
            else if constexpr (std::is_same_v<T, DoubleSlit>) return k.width;
            else if constexpr (std::is_same_v<T, CircularAperture>) return 2.0 * k.radius;
            // a heightfield is already sampled; the grid must not be coarser
            else if constexpr (std::is_same_v<T, Heightfield>) return 8.0 * k.dx;
            else return std::numeric_limits<double>::infinity();
        },
        s.kind);
}

double height_at(const Heightfield& hf, double x) {
    // piecewise-linear lookup, clamped ends; heightfield sample i sits at i*dx
    const double q = x / hf.dx;
    if (q <= 0.0) return hf.samples.front();
    const double last = static_cast<double>(hf.samples.size() - 1);
    if (q >= last) return hf.samples.back();
    const std::size_t i = static_cast<std::size_t>(q);
    const double f = q - static_cast<double>(i);
    return hf.samples[i] * (1.0 - f) + hf.samples[i + 1] * f;
}

}  // namespace

ComplexGrid realize(const Microstructure& s, Wavelength lambda, double theta_i,
                    const GridSpec& grid) {
    s.validate();
    lambda.validate();
    if (grid.n < 2 || !is_power_of_two(grid.n) || !(grid.dx > 0.0))
        throw ArgumentError("realize: grid must be a power of two with dx > 0");

    const double period = finest_period(s);
    if (std::isfinite(period) && grid.dx * 8.0 > period)
        throw PrecisionError("realize: grid undersamples the finest feature (< 8 samples/period)");

    const double phase_scale = s.mode == SurfaceMode::reflective
                                   ? (kTwoPi / lambda.lambda) * (1.0 + std::cos(theta_i))
                                   : (kTwoPi / lambda.lambda) * (s.refractive_index - 1.0);

    ComplexGrid t;
    t.dx = grid.dx;
    t.x0 = grid.x0;
    t.samples.resize(grid.n);

    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x0 + static_cast<double>(i) * grid.dx;
        double amp = 1.0;
        double h = 0.0;
        std::visit(
            [&](const auto& k) {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, Flat>) {
                } else if constexpr (std::is_same_v<T, SinusoidalGrating>) {
                    h = 0.5 * k.height * std::sin(kTwoPi * x / k.pitch);
                } else if constexpr (std::is_same_v<T, BinaryPhaseGrating>) {
                    double frac = x / k.pitch - std::floor(x / k.pitch);
                    h = frac < k.duty ? k.depth : 0.0;
                } else if constexpr (std::is_same_v<T, Slit>) {
                    // half-open [-w/2, w/2) so the open width is exactly w/dx
                    // samples; the epsilon absorbs coordinate roundoff
                    const double eps = 1e-9 * grid.dx;
                    amp = (x >= -0.5 * k.width - eps && x < 0.5 * k.width - eps) ? 1.0 : 0.0;
                } else if constexpr (std::is_same_v<T, DoubleSlit>) {
                    const double eps = 1e-9 * grid.dx;
                    const double c = 0.5 * k.separation;
                    const double xl = x + c, xr = x - c;
                    amp = ((xl >= -0.5 * k.width - eps && xl < 0.5 * k.width - eps) ||
                           (xr >= -0.5 * k.width - eps && xr < 0.5 * k.width - eps))
                              ? 1.0
                              : 0.0;
                } else if constexpr (std::is_same_v<T, CircularAperture>) {
                    // 1D section through the center
                    const double eps = 1e-9 * grid.dx;
                    amp = (x >= -k.radius - eps && x < k.radius - eps) ? 1.0 : 0.0;
                } else if constexpr (std::is_same_v<T, Heightfield>) {
                    h = height_at(k, x - grid.x0);
                }
            },
            s.kind);
        if (s.amplitude_mask) {
            const auto& mask = *s.amplitude_mask;
            const std::size_t mi = std::min(i * mask.size() / grid.n, mask.size() - 1);
            amp *= mask[mi];
        }
        t.samples[i] = std::polar(amp, phase_scale * h);
    }
    return t;
}

HeightAutocorrelation autocorrelation_height(const Heightfield& hf) {
    if (hf.samples.empty()) throw ArgumentError("autocorrelation_height: empty heightfield");
    const std::size_t n = hf.samples.size();
    double mean = 0.0;
    for (double h : hf.samples) mean += h;
    mean /= static_cast<double>(n);

    HeightAutocorrelation out;
    out.r_h.assign(n, 0.0);
    double var = 0.0;
    for (double h : hf.samples) var += (h - mean) * (h - mean);
    var /= static_cast<double>(n);
    out.sigma_h = std::sqrt(var);
    if (var == 0.0) return out;  // constant heightfield: R_h identically zero

    for (std::size_t l = 0; l < n; ++l) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + l) % n;
            acc += (hf.samples[i] - mean) * (hf.samples[j] - mean);
        }
        out.r_h[l] = acc / static_cast<double>(n);
    }
    return out;
}

Heightfield read_heightfield_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("read_heightfield_csv: cannot open " + path);
    Heightfield hf;
    std::vector<double> xs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.find("x_meters") != std::string::npos) continue;  // header
        std::istringstream ss(line);
        double x, h;
        char comma;
        if (!(ss >> x >> comma >> h))
            throw DataError("read_heightfield_csv: malformed line: " + line);
        xs.push_back(x);
        hf.samples.push_back(h);
    }
    if (xs.size() < 2) throw DataError("read_heightfield_csv: need at least 2 samples");
    const double dx = xs[1] - xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double step = xs[i] - xs[i - 1];
        if (std::abs(step - dx) > 1e-9 * std::abs(dx))
            throw DataError("read_heightfield_csv: non-uniform spacing");
    }
    hf.dx = dx;
    return hf;
}

}  // namespace wbsdf
