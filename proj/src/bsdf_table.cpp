#include "wbsdf/bsdf_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

namespace wbsdf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void StatisticalSurfaceSpec::validate() const {
    if (!(sigma_h >= 0.0)) throw ArgumentError("StatisticalSurfaceSpec: sigma_h must be >= 0");
    if (quartic_a && !(*quartic_a > 0.0))
        throw ArgumentError("StatisticalSurfaceSpec: quartic scale must be > 0");
    if (!quartic_a && !sampled_r_h && sigma_h > 0.0)
        throw ArgumentError("StatisticalSurfaceSpec: need quartic_a or sampled_r_h");
    if (sampled_r_h) {
        const auto& r = *sampled_r_h;
        if (r.empty()) throw ArgumentError("StatisticalSurfaceSpec: empty sampled R_h");
        const double s2 = sigma_h * sigma_h;
        if (std::abs(r[0] - s2) > 1e-9 * std::max(s2, 1e-300))
            throw ArgumentError("StatisticalSurfaceSpec: sampled R_h(0) must equal sigma_h^2");
        for (double v : r)
            if (!(std::abs(v) <= s2 * (1.0 + 1e-9)))
                throw ArgumentError("StatisticalSurfaceSpec: |rho_h| must not exceed 1");
    }
}

double StatisticalSurfaceSpec::one_minus_rho(std::size_t lag, std::size_t n, double dx) const {
    const long sl = lag <= n / 2 ? static_cast<long>(lag) : static_cast<long>(lag) - static_cast<long>(n);
    if (sampled_r_h) {
        const auto& r = *sampled_r_h;
        const std::size_t i = static_cast<std::size_t>(std::abs(sl)) % r.size();
        return 1.0 - r[i] / (sigma_h * sigma_h);
    }
    const double x = static_cast<double>(sl) * dx;
    const double q = x / *quartic_a;
    return q * q * q * q;
}

WignerTable statistical_wbsdf(const StatisticalSurfaceSpec& spec, double theta_i, double lambda,
                              const TableAxes& axes) {
    spec.validate();
    Wavelength{lambda}.validate();
    if (axes.n < 2 || !is_power_of_two(axes.n) || !(axes.dx > 0.0))
        throw ArgumentError("statistical_wbsdf: bad table axes");

    WignerTable w;
    w.nx = 1;
    w.nu = axes.n;
    w.dx = axes.dx;
    w.x0 = axes.x0;
    w.du = 1.0 / (static_cast<double>(axes.n) * axes.dx);
    w.u0 = -0.5 / axes.dx;
    w.values.assign(axes.n, 0.0);

    const double u_i = std::sin(theta_i) / lambda;

    if (spec.sigma_h == 0.0) {
        // smooth-surface limit: pure carrier, delta at the specular frequency
        long bin = std::lround((u_i - w.u0) / w.du);
        bin = std::clamp<long>(bin, 0, static_cast<long>(axes.n) - 1);
        w.values[static_cast<std::size_t>(bin)] = 1.0 / w.du;
        return w;
    }

    const double sigma = spec.sigma_h / lambda;
    const double sigma_a2 = std::pow(kTwoPi * sigma * (1.0 + std::cos(theta_i)), 2);

    // gamma(x') = e^{i k_i x'} e^{-sigma_a^2 [1 - rho_h(x')]}; the exponent is
    // assembled in log space and is <= 0 for any valid rho_h.
    std::vector<cdouble> gamma(axes.n);
    for (std::size_t l = 0; l < axes.n; ++l) {
        const double omr = spec.one_minus_rho(l, axes.n, axes.dx);
        if (omr < -1e-12) throw DataError("statistical_wbsdf: rho_h exceeds 1");
        const double expo = -sigma_a2 * std::max(omr, 0.0);
        if (!(expo <= 0.0) || std::isnan(expo))
            throw PrecisionError("statistical_wbsdf: exponent overflow");
        const double env = expo < -745.0 ? 0.0 : std::exp(expo);
        const long sl = l <= axes.n / 2 ? static_cast<long>(l)
                                        : static_cast<long>(l) - static_cast<long>(axes.n);
        const double xp = static_cast<double>(sl) * axes.dx;
        gamma[l] = std::polar(env, kTwoPi * u_i * xp);
    }
    fft_inplace(gamma.data(), axes.n, false);

    double max_re = 0.0, max_im = 0.0;
    for (std::size_t mu = 0; mu < axes.n; ++mu) {
        const std::size_t iu = (mu + axes.n / 2) % axes.n;
        w.values[iu] = gamma[mu].real() * axes.dx;
        max_re = std::max(max_re, std::abs(gamma[mu].real()));
        max_im = std::max(max_im, std::abs(gamma[mu].imag()));
    }
    // the lone unpaired lag at N/2 carries e^{-sigma_a^2 (1-rho(N dx/2))} ~ 0
    if (max_im > 1e-8 * std::max(max_re, std::numeric_limits<double>::min()))
        throw ConsistencyError("statistical_wbsdf: imaginary residue above tolerance");
    return w;
}

Wbsdf Wbsdf::from_wdf(WignerTable w, SurfaceMode mode) {
    w.validate();
    Wbsdf b;
    b.mode_ = mode;
    b.abs_cdf_.assign(w.nx * w.nu, 0.0);
    b.spectrum_u_.assign(w.nu, 0.0);
    double total = 0.0;
    for (std::size_t ix = 0; ix < w.nx; ++ix) {
        double acc = 0.0;
        for (std::size_t iu = 0; iu < w.nu; ++iu) {
            const double v = w.at(ix, iu);
            acc += std::abs(v);
            b.abs_cdf_[ix * w.nu + iu] = acc;
            b.spectrum_u_[iu] += v * w.dx;
        }
        total += acc;
    }
    if (total <= 0.0) throw DataError("Wbsdf: all-zero table");
    b.w_ = std::move(w);
    return b;
}

std::size_t Wbsdf::x_bin(double x) const {
    const double tile = tile_extent();
    double f = std::fmod(x - w_.x0, tile);
    if (f < 0.0) f += tile;
    std::size_t ix = static_cast<std::size_t>(f / w_.dx);
    return std::min(ix, w_.nx - 1);
}

double Wbsdf::delta_u(double theta_i, double theta_o, double lambda) const {
    const double s = mode_ == SurfaceMode::transmissive ? 1.0 : -1.0;
    return (s * std::sin(theta_o) - std::sin(theta_i)) / lambda;
}

double Wbsdf::eval(double x, double theta_i, double theta_o, double lambda) const {
    if (!(std::abs(theta_i) < 0.5 * std::numbers::pi) ||
        !(std::abs(theta_o) < 0.5 * std::numbers::pi))
        throw ArgumentError("Wbsdf::eval: angles must satisfy |theta| < pi/2");
    const double du_shift = delta_u(theta_i, theta_o, lambda);

    const double fu = (du_shift - w_.u0) / w_.du;
    if (fu < 0.0 || fu > static_cast<double>(w_.nu - 1)) return 0.0;
    const std::size_t u0i = std::min(static_cast<std::size_t>(fu), w_.nu - 2);
    const double tu = fu - static_cast<double>(u0i);

    // x wraps circularly over the tile
    const double tile = tile_extent();
    double fx = std::fmod(x - w_.x0, tile);
    if (fx < 0.0) fx += tile;
    fx /= w_.dx;
    const std::size_t x0i = std::min(static_cast<std::size_t>(fx), w_.nx - 1);
    const std::size_t x1i = (x0i + 1) % w_.nx;
    const double tx = fx - static_cast<double>(x0i);

    const double v00 = w_.at(x0i, u0i), v01 = w_.at(x0i, u0i + 1);
    const double v10 = w_.at(x1i, u0i), v11 = w_.at(x1i, u0i + 1);
    return (1.0 - tx) * ((1.0 - tu) * v00 + tu * v01) + tx * ((1.0 - tu) * v10 + tu * v11);
}

Wbsdf::DirectionSample Wbsdf::sample(double x, double theta_i, double lambda, double u1) const {
    if (!(u1 >= 0.0 && u1 < 1.0)) throw ArgumentError("Wbsdf::sample: u1 must lie in [0,1)");
    const double s = mode_ == SurfaceMode::transmissive ? 1.0 : -1.0;
    const double si = std::sin(theta_i);
    // propagating range: |si + du_shift * lambda| <= 1
    const double lo_u = (-1.0 - si) / lambda;
    const double hi_u = (1.0 - si) / lambda;
    const std::size_t ix = x_bin(x);
    const double* cdf = &abs_cdf_[ix * w_.nu];

    long lo = static_cast<long>(std::ceil((lo_u - w_.u0) / w_.du - 1e-12));
    long hi = static_cast<long>(std::floor((hi_u - w_.u0) / w_.du + 1e-12));
    lo = std::max<long>(lo, 0);
    hi = std::min<long>(hi, static_cast<long>(w_.nu) - 1);
    if (lo > hi) throw SamplingError("Wbsdf::sample: every bin is evanescent");

    const double below = lo > 0 ? cdf[lo - 1] : 0.0;
    const double mass = cdf[hi] - below;
    if (!(mass > 0.0)) throw SamplingError("Wbsdf::sample: no propagating mass");

    const double target = below + u1 * mass;
    const double* first = cdf + lo;
    const double* last = cdf + hi + 1;
    const double* it = std::lower_bound(first, last, target);
    if (it == last) it = last - 1;
    const std::size_t bin = static_cast<std::size_t>(it - cdf);

    const double w_val = w_.at(ix, bin);
    const double abs_w = std::abs(w_val);
    DirectionSample out;
    out.bin = bin;
    out.pdf = abs_w / mass;
    const double du_shift = w_.u_at(bin);
    const double sin_o = s * (si + du_shift * lambda);
    out.theta_o = std::asin(std::clamp(sin_o, -1.0, 1.0));
    out.weight = (w_val < 0.0 ? -1.0 : 1.0) * mass * w_.du;
    return out;
}

double Wbsdf::evanescent_excluded_fraction(double x, double theta_i, double lambda) const {
    const double si = std::sin(theta_i);
    const double lo_u = (-1.0 - si) / lambda;
    const double hi_u = (1.0 - si) / lambda;
    const std::size_t ix = x_bin(x);
    const double* cdf = &abs_cdf_[ix * w_.nu];
    const double total = cdf[w_.nu - 1];
    if (total <= 0.0) return 0.0;
    long lo = static_cast<long>(std::ceil((lo_u - w_.u0) / w_.du - 1e-12));
    long hi = static_cast<long>(std::floor((hi_u - w_.u0) / w_.du + 1e-12));
    lo = std::max<long>(lo, 0);
    hi = std::min<long>(hi, static_cast<long>(w_.nu) - 1);
    if (lo > hi) return 1.0;
    const double below = lo > 0 ? cdf[lo - 1] : 0.0;
    return 1.0 - (cdf[hi] - below) / total;
}

double Wbsdf::stam_far_field(double theta_1, double theta_2, double lambda) const {
    const double up = (std::sin(theta_1) - std::sin(theta_2)) / lambda;
    const double fu = (up - w_.u0) / w_.du;
    if (fu < 0.0 || fu > static_cast<double>(w_.nu - 1)) return 0.0;
    const std::size_t i = std::min(static_cast<std::size_t>(fu), w_.nu - 2);
    const double t = fu - static_cast<double>(i);
    return (1.0 - t) * spectrum_u_[i] + t * spectrum_u_[i + 1];
}

const Wbsdf& WbsdfSet::nearest(double lambda) const {
    if (tables.empty()) throw DataError("WbsdfSet: empty");
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double d = std::abs(lambdas[i] - lambda);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return tables[best];
}

namespace {

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("wbsdf binary: truncated file");
    return v;
}

}  // namespace

void write_wbsdf_binary(const WbsdfSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("write_wbsdf_binary: cannot open " + path);
    out.write("WBSDF1", 6);
    put<std::uint32_t>(out, 1u);
    put<std::uint32_t>(out, set.mode == SurfaceMode::transmissive ? 0u : 1u);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(set.tables.size()));
    for (std::size_t i = 0; i < set.tables.size(); ++i) {
        const WignerTable& w = set.tables[i].table();
        put<double>(out, set.lambdas[i]);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(w.nx));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(w.nu));
        put<double>(out, w.dx);
        put<double>(out, w.x0);
        put<double>(out, w.du);
        put<double>(out, w.u0);
        out.write(reinterpret_cast<const char*>(w.values.data()),
                  static_cast<std::streamsize>(w.values.size() * sizeof(double)));
    }
}

WbsdfSet read_wbsdf_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("read_wbsdf_binary: cannot open " + path);
    char magic[6];
    in.read(magic, 6);
    if (!in || std::memcmp(magic, "WBSDF1", 6) != 0)
        throw DataError("read_wbsdf_binary: bad magic");
    const auto version = get<std::uint32_t>(in);
    if (version != 1) throw DataError("read_wbsdf_binary: unsupported version");
    WbsdfSet set;
    set.mode = get<std::uint32_t>(in) == 0 ? SurfaceMode::transmissive : SurfaceMode::reflective;
    const auto count = get<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < count; ++i) {
        const double lambda = get<double>(in);
        WignerTable w;
        w.nx = get<std::uint32_t>(in);
        w.nu = get<std::uint32_t>(in);
        w.dx = get<double>(in);
        w.x0 = get<double>(in);
        w.du = get<double>(in);
        w.u0 = get<double>(in);
        w.values.resize(w.nx * w.nu);
        in.read(reinterpret_cast<char*>(w.values.data()),
                static_cast<std::streamsize>(w.values.size() * sizeof(double)));
        if (!in) throw DataError("read_wbsdf_binary: truncated values");
        set.lambdas.push_back(lambda);
        set.tables.push_back(Wbsdf::from_wdf(std::move(w), set.mode));
    }
    return set;
}

}  // namespace wbsdf
