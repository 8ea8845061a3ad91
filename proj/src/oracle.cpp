#include "wbsdf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wbsdf/rng.hpp"

namespace wbsdf::oracle {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void PropagationSpec::validate() const {
    if (regime != Regime::fraunhofer && !(z > 0.0))
        throw ArgumentError("PropagationSpec: z must be > 0 for near-field regimes");
    if (!(lambda > 0.0)) throw ArgumentError("PropagationSpec: lambda must be > 0");
    for (std::size_t i = 1; i < receiver.size(); ++i)
        if (!(receiver[i] > receiver[i - 1]))
            throw ArgumentError("PropagationSpec: receiver axis must be monotone");
}

FarField far_field_intensity(const ComplexGrid& t, double lambda) {
    t.validate();
    if (!(lambda > 0.0)) throw ArgumentError("far_field_intensity: lambda must be > 0");
    const std::size_t n = t.size();
    std::vector<cdouble> spec = fft(t.samples);
    FarField out;
    out.sin_theta.reserve(n);
    out.intensity.reserve(n);
    // ascending u: bins -N/2 .. N/2-1
    for (std::size_t i = 0; i < n; ++i) {
        const long sb = static_cast<long>(i) - static_cast<long>(n / 2);
        const double u = static_cast<double>(sb) / (static_cast<double>(n) * t.dx);
        const double st = u * lambda;
        if (std::abs(st) > 1.0) continue;
        const std::size_t mu = static_cast<std::size_t>((sb + static_cast<long>(n)) %
                                                        static_cast<long>(n));
        out.sin_theta.push_back(st);
        out.intensity.push_back(std::norm(spec[mu] * t.dx));
    }
    return out;
}

namespace {

// The intensity fringe frequency on the receiver is bounded by the width of
// the aperture's nonzero support over lambda z (path difference between the
// extreme contributors). Receiver spacing must stay under half its period.
void check_nyquist(const ComplexGrid& t, double z, double lambda,
                   const std::vector<double>& receiver) {
    if (receiver.size() < 2) return;
    double x_lo = 0.0, x_hi = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.samples[i] == cdouble(0, 0)) continue;
        const double x = t.x_at(i);
        if (!any) {
            x_lo = x_hi = x;
            any = true;
        } else {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
        }
    }
    if (!any) return;
    const double f_max = (x_hi - x_lo) / (lambda * z);
    if (f_max <= 0.0) return;
    double dr = std::abs(receiver[1] - receiver[0]);
    for (std::size_t i = 1; i < receiver.size(); ++i)
        dr = std::max(dr, std::abs(receiver[i] - receiver[i - 1]));
    if (dr > 0.5 / f_max)
        throw PrecisionError("huygens_sum: receiver sampling violates Nyquist for the fringe frequency");
}

}  // namespace

std::vector<cdouble> huygens_sum(const ComplexGrid& t, double z, double lambda,
                                 const std::vector<double>& receiver_points) {
    t.validate();
    if (!(z > 0.0)) throw ArgumentError("huygens_sum: z must be > 0");
    check_nyquist(t, z, lambda, receiver_points);
    std::vector<cdouble> field(receiver_points.size(), cdouble(0, 0));
    const double k = kTwoPi / lambda;
    for (std::size_t ri = 0; ri < receiver_points.size(); ++ri) {
        cdouble acc(0, 0);
        const double r = receiver_points[ri];
        for (std::size_t i = 0; i < t.size(); ++i) {
            const cdouble s = t.samples[i];
            if (s == cdouble(0, 0)) continue;
            const double x = t.x_at(i);
            const double d = std::hypot(z, r - x);
            acc += s * std::polar(1.0 / d, k * d);
        }
        field[ri] = acc;
    }
    return field;
}

std::vector<cdouble> fresnel_sum(const ComplexGrid& t, double z, double lambda,
                                 const std::vector<double>& receiver_points) {
    t.validate();
    if (!(z > 0.0)) throw ArgumentError("fresnel_sum: z must be > 0");
    check_nyquist(t, z, lambda, receiver_points);
    std::vector<cdouble> field(receiver_points.size(), cdouble(0, 0));
    const double k = kTwoPi / lambda;
    for (std::size_t ri = 0; ri < receiver_points.size(); ++ri) {
        cdouble acc(0, 0);
        const double r = receiver_points[ri];
        for (std::size_t i = 0; i < t.size(); ++i) {
            const cdouble s = t.samples[i];
            if (s == cdouble(0, 0)) continue;
            const double x = t.x_at(i);
            const double q = (r - x) * (r - x) / (2.0 * z);
            acc += s * std::polar(1.0 / z, k * (z + q));
        }
        field[ri] = acc;
    }
    return field;
}

std::vector<cdouble> propagate(const ComplexGrid& t, const PropagationSpec& spec) {
    spec.validate();
    switch (spec.regime) {
        case Regime::huygens_direct:
            return huygens_sum(t, spec.z, spec.lambda, spec.receiver);
        case Regime::fresnel:
            return fresnel_sum(t, spec.z, spec.lambda, spec.receiver);
        case Regime::fraunhofer: {
            // angular receiver: complex far-field amplitude at sin(theta) points
            const FarField ff = far_field_intensity(t, spec.lambda);
            std::vector<cdouble> spec_full = fft(t.samples);
            std::vector<cdouble> out;
            out.reserve(spec.receiver.size());
            const std::size_t n = t.size();
            for (double st : spec.receiver) {
                const double u = st / spec.lambda;
                const double fbin = u * static_cast<double>(n) * t.dx;
                const long b = std::lround(fbin);
                const std::size_t mu =
                    static_cast<std::size_t>(((b % static_cast<long>(n)) + static_cast<long>(n)) %
                                             static_cast<long>(n));
                out.push_back(spec_full[mu] * t.dx);
            }
            return out;
        }
    }
    throw ArgumentError("propagate: unknown regime");
}

std::vector<double> realizable_autocorrelation(const StatisticalSurfaceSpec& spec, std::size_t n,
                                               double dx) {
    spec.validate();
    if (!is_power_of_two(n)) throw ArgumentError("realizable_autocorrelation: n must be a power of two");
    const double s2 = spec.sigma_h * spec.sigma_h;
    std::vector<cdouble> r(n);
    for (std::size_t l = 0; l < n; ++l) {
        if (spec.sampled_r_h) {
            const auto& rs = *spec.sampled_r_h;
            const long sl = l <= n / 2 ? static_cast<long>(l)
                                       : static_cast<long>(l) - static_cast<long>(n);
            r[l] = rs[static_cast<std::size_t>(std::abs(sl)) % rs.size()];
        } else {
            // decaying extension of the quartic local model
            const long sl = l <= n / 2 ? static_cast<long>(l)
                                       : static_cast<long>(l) - static_cast<long>(n);
            const double q = static_cast<double>(sl) * dx / *spec.quartic_a;
            const double e = q * q * q * q;
            r[l] = s2 * (e > 745.0 ? 0.0 : std::exp(-e));
        }
    }
    if (s2 == 0.0) return std::vector<double>(n, 0.0);
    fft_inplace(r.data(), n, false);
    double pos = 0.0, neg = 0.0;
    for (auto& v : r) {
        const double re = v.real();
        if (re >= 0.0)
            pos += re;
        else
            neg -= re;
        v = cdouble(std::max(re, 0.0), 0.0);
    }
    if (neg > 0.25 * (pos + neg))
        throw DataError("realizable_autocorrelation: target autocorrelation is far from positive semidefinite");
    // renormalize to exact sigma_h^2 power
    const double scale = s2 * static_cast<double>(n) / pos;
    for (auto& v : r) v *= scale;
    fft_inplace(r.data(), n, true);
    std::vector<double> out(n);
    for (std::size_t l = 0; l < n; ++l) out[l] = r[l].real();
    return out;
}

EnsembleResult ensemble_statistical(const StatisticalSurfaceSpec& spec, double theta_i,
                                    double lambda, int n_surfaces, std::uint64_t seed,
                                    const GridSpec& grid) {
    spec.validate();
    if (n_surfaces < 100) throw ArgumentError("ensemble_statistical: need n_surfaces >= 100");
    const std::size_t n = grid.n;
    if (!is_power_of_two(n) || !(grid.dx > 0.0))
        throw ArgumentError("ensemble_statistical: bad grid");

    EnsembleResult out;
    out.r_h_target = realizable_autocorrelation(spec, n, grid.dx);

    // spectral synthesis weights: sqrt of the (clamped) power spectrum
    std::vector<cdouble> psd(n);
    for (std::size_t l = 0; l < n; ++l) psd[l] = cdouble(out.r_h_target[l], 0.0);
    fft_inplace(psd.data(), n, false);
    std::vector<double> sqrt_s(n);
    for (std::size_t k = 0; k < n; ++k) sqrt_s[k] = std::sqrt(std::max(psd[k].real(), 0.0));

    const double u_i = std::sin(theta_i) / lambda;
    std::vector<double> acc;       // mean intensity over DFT bins
    acc.assign(n, 0.0);
    std::vector<double> r_acc(n, 0.0);
    double var_acc = 0.0;

    std::vector<cdouble> noise(n);
    Heightfield hf;
    hf.dx = grid.dx;
    hf.samples.resize(n);
    Microstructure surf{hf, SurfaceMode::reflective, std::nullopt};

    for (int s = 0; s < n_surfaces; ++s) {
        RngStream rng = RngStream::from(seed, 0x5u, static_cast<std::uint64_t>(s));
        for (std::size_t k = 0; k < n; ++k)
            noise[k] = sqrt_s[k] * cdouble(rng.next_normal(), rng.next_normal());
        fft_inplace(noise.data(), n, true);
        Heightfield& cur = std::get<Heightfield>(surf.kind);
        const double root_n = std::sqrt(static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) cur.samples[i] = root_n * noise[i].real();

        // sample moments
        double mean = 0.0;
        for (double h : cur.samples) mean += h;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double h : cur.samples) var += (h - mean) * (h - mean);
        var /= static_cast<double>(n);
        var_acc += var;

        ComplexGrid t = realize(surf, Wavelength{lambda}, theta_i, grid);
        for (std::size_t i = 0; i < n; ++i)
            t.samples[i] *= std::polar(1.0, kTwoPi * u_i * t.x_at(i));

        std::vector<cdouble> spec_fft = fft(t.samples);
        for (std::size_t k = 0; k < n; ++k) acc[k] += std::norm(spec_fft[k] * grid.dx);

        // circular autocorrelation via |FFT(h)|^2 (mean removed)
        for (std::size_t i = 0; i < n; ++i) noise[i] = cdouble(cur.samples[i] - mean, 0.0);
        fft_inplace(noise.data(), n, false);
        for (std::size_t k = 0; k < n; ++k) noise[k] = cdouble(std::norm(noise[k]), 0.0);
        fft_inplace(noise.data(), n, true);
        for (std::size_t l = 0; l < n; ++l) r_acc[l] += noise[l].real() / static_cast<double>(n);
    }

    const double inv = 1.0 / static_cast<double>(n_surfaces);
    out.sigma_h_hat = std::sqrt(var_acc * inv);
    out.r_h_hat.resize(n);
    for (std::size_t l = 0; l < n; ++l) out.r_h_hat[l] = r_acc[l] * inv;

    out.mean_intensity.sin_theta.reserve(n);
    out.mean_intensity.intensity.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long sb = static_cast<long>(i) - static_cast<long>(n / 2);
        const double u = static_cast<double>(sb) / (static_cast<double>(n) * grid.dx);
        const double st = u * lambda;
        if (std::abs(st) > 1.0) continue;
        const std::size_t mu = static_cast<std::size_t>((sb + static_cast<long>(n)) %
                                                        static_cast<long>(n));
        out.mean_intensity.sin_theta.push_back(st);
        out.mean_intensity.intensity.push_back(acc[mu] * inv);
    }
    return out;
}

OpdImage opd_render_reference(const OpdScene& scene, int samples_per_dir,
                              double target_rel_noise, std::uint64_t seed) {
    if (scene.receiver_xs.empty()) throw ArgumentError("opd_render_reference: empty receiver");
    if (std::holds_alternative<CircularAperture>(scene.structure.kind))
        throw ScopeError("opd_render_reference: 2D structures unsupported");
    if (!(scene.source_z > 0.0) || !(scene.receiver_z > 0.0))
        throw ScopeError("opd_render_reference: single-bounce scene requires source and receiver in front of the patch");

    ComplexGrid t = realize(scene.structure, Wavelength{scene.lambda}, 0.0, scene.grid);
    const double k = kTwoPi / scene.lambda;

    OpdImage out;
    out.intensity.assign(scene.receiver_xs.size(), 0.0);

    // exact reference: sum over every grating sample with full path phase
    std::vector<cdouble> terms(t.size());
    double mean_counts = 0.0;
    for (std::size_t ri = 0; ri < scene.receiver_xs.size(); ++ri) {
        const double rx = scene.receiver_xs[ri];
        cdouble acc(0, 0);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double x = t.x_at(i);
            const double d1 = std::hypot(scene.source_z, x - scene.source_x);
            const double d2 = std::hypot(scene.receiver_z, rx - x);
            const cdouble v = t.samples[i] * std::polar(1.0 / (d1 * d2), k * (d1 + d2));
            terms[i] = v;
            acc += v;
        }
        out.intensity[ri] = std::norm(acc);

        // uniform Monte Carlo over the patch: batches until the intensity
        // estimate's relative error drops under the target
        if (target_rel_noise > 0.0 && out.intensity[ri] > 0.0) {
            RngStream rng = RngStream::from(seed, 0x09duLL, ri);
            cdouble macc(0, 0);
            double count = 0.0;
            const double scale = static_cast<double>(t.size());
            double rel = 1.0;
            const int batch = std::max(1, samples_per_dir);
            for (int rounds = 0; rounds < 10000 && rel > target_rel_noise; ++rounds) {
                for (int b = 0; b < batch; ++b) {
                    const std::size_t i = static_cast<std::size_t>(rng.next_below(t.size()));
                    macc += terms[i] * scale;
                    count += 1.0;
                }
                const cdouble est = macc / count;
                rel = std::abs(std::norm(est) - out.intensity[ri]) /
                      std::max(out.intensity[ri], 1e-300);
            }
            mean_counts += count;
        }
    }
    out.mc_samples_to_noise = mean_counts / static_cast<double>(scene.receiver_xs.size());
    return out;
}

}  // namespace wbsdf::oracle
