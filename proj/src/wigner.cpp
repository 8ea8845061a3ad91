#include "wbsdf/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace wbsdf {

void WignerTable::validate() const {
    if (nx == 0 || nu == 0 || values.size() != nx * nu)
        throw ArgumentError("WignerTable: shape mismatch");
    if (!(dx > 0.0) || !(du > 0.0)) throw ArgumentError("WignerTable: pitch must be > 0");
    const double expected_du = 1.0 / (static_cast<double>(nu) * dx);
    if (std::abs(du - expected_du) > 4.0 * std::numeric_limits<double>::epsilon() * expected_du)
        throw ConsistencyError("WignerTable: du is not DFT-consistent with dx");
    for (double v : values)
        if (!std::isfinite(v)) throw DataError("WignerTable: non-finite value");
}

std::vector<cdouble> mutual_intensity(const ComplexGrid& t, std::size_t x_index) {
    t.validate();
    const std::size_t n = t.size();
    if (x_index >= n) throw ArgumentError("mutual_intensity: x_index out of range");
    const long half = static_cast<long>(n) / 2;
    std::vector<cdouble> j(n, cdouble(0.0, 0.0));
    const long c = static_cast<long>(x_index);
    for (long k = -half; k < half; ++k) {
        const long a = c + k;
        const long b = c - k;
        if (a < 0 || b < 0 || a >= static_cast<long>(n) || b >= static_cast<long>(n)) continue;
        j[static_cast<std::size_t>(k + half)] =
            t.samples[static_cast<std::size_t>(a)] * std::conj(t.samples[static_cast<std::size_t>(b)]);
    }
    return j;
}

namespace {

// 2x trigonometric interpolation: length-2N signal whose even samples are t
// and whose spectrum is t's spectrum placed at signed bins -N/2..N/2-1.
std::vector<cdouble> upsample2(const ComplexGrid& t) {
    const std::size_t n = t.size();
    std::vector<cdouble> spec = fft(t.samples);
    std::vector<cdouble> pad(2 * n, cdouble(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const long sb = signed_bin(k, n);
        const std::size_t dest = static_cast<std::size_t>((sb + static_cast<long>(2 * n)) % static_cast<long>(2 * n));
        pad[dest] = spec[k];
    }
    std::vector<cdouble> fine = ifft(std::move(pad));
    for (cdouble& v : fine) v *= 2.0;
    return fine;
}

}  // namespace

WignerTable wdf_1d(const ComplexGrid& t) {
    t.validate();
    const std::size_t n = t.size();
    const long ln = static_cast<long>(n);
    const long fine_n = 2 * ln;
    const std::vector<cdouble> fine = upsample2(t);

    WignerTable w;
    w.nx = n;
    w.nu = n;
    w.dx = t.dx;
    w.x0 = t.x0;
    w.du = 1.0 / (static_cast<double>(n) * t.dx);
    w.u0 = -0.5 / t.dx;
    w.values.assign(n * n, 0.0);

    std::vector<cdouble> lags(n);
    std::vector<cdouble> row(n);
    double max_abs = 0.0;
    double max_imag = 0.0;
    for (std::size_t ix = 0; ix < n; ++ix) {
        // Fold the symmetrized lag window k = -N/2..N/2 (half weight at the
        // endpoints) into N residues; the window pairs k and -k so the folded
        // sequence is Hermitian and the DFT below is real up to roundoff.
        std::fill(lags.begin(), lags.end(), cdouble(0.0, 0.0));
        const long c2 = 2 * static_cast<long>(ix);
        for (long k = -ln / 2; k <= ln / 2; ++k) {
            const double weight = (k == -ln / 2 || k == ln / 2) ? 0.5 : 1.0;
            const std::size_t a = static_cast<std::size_t>(((c2 + k) % fine_n + fine_n) % fine_n);
            const std::size_t b = static_cast<std::size_t>(((c2 - k) % fine_n + fine_n) % fine_n);
            const std::size_t r = static_cast<std::size_t>((k % ln + ln) % ln);
            lags[r] += weight * fine[a] * std::conj(fine[b]);
        }
        std::copy(lags.begin(), lags.end(), row.begin());
        fft_inplace(row.data(), n, false);
        // DFT bin mu maps to centered u index mu + N/2 (mod N).
        for (std::size_t mu = 0; mu < n; ++mu) {
            const std::size_t iu = (mu + n / 2) % n;
            const double re = row[mu].real() * t.dx;
            w.at(ix, iu) = re;
            max_abs = std::max(max_abs, std::abs(re));
            max_imag = std::max(max_imag, std::abs(row[mu].imag()) * t.dx);
        }
    }
    if (max_imag > 1e-10 * std::max(max_abs, std::numeric_limits<double>::min()))
        throw ConsistencyError("wdf_1d: imaginary residue above tolerance");
    return w;
}

std::pair<WignerTable, WignerTable> wdf_2d_separable(const ComplexGrid2D& t) {
    t.validate();
    // Reference row/column through the largest-magnitude sample.
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        const double m = std::abs(t.samples[i]);
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    if (best_mag <= 0.0) throw DataError("wdf_2d_separable: all-zero field");
    const std::size_t rx = best / t.ny;
    const std::size_t ry = best % t.ny;

    ComplexGrid t1, t2;
    t1.dx = t.dx;
    t1.x0 = t.x0;
    t1.samples.resize(t.nx);
    for (std::size_t i = 0; i < t.nx; ++i) t1.samples[i] = t.at(i, ry);
    t2.dx = t.dy;
    t2.x0 = t.y0;
    t2.samples.resize(t.ny);
    const cdouble pivot = t.at(rx, ry);
    for (std::size_t j = 0; j < t.ny; ++j) t2.samples[j] = t.at(rx, j) / pivot;

    // Spot-check separability on a deterministic stratified sample of points.
    const std::size_t checks = std::min<std::size_t>(t.nx * t.ny, 256);
    const std::size_t stride = std::max<std::size_t>(1, t.nx * t.ny / checks);
    for (std::size_t i = 0; i < t.nx * t.ny; i += stride) {
        const std::size_t ix = i / t.ny, iy = i % t.ny;
        const cdouble recon = t1.samples[ix] * t2.samples[iy];
        if (std::abs(recon - t.samples[i]) > 1e-6 * best_mag)
            throw DataError("wdf_2d_separable: field is not separable (reconstruction error above 1e-6)");
    }
    return {wdf_1d(t1), wdf_1d(t2)};
}

double bessel_j(int order, double x) {
    const int q = std::abs(order);
    double v = std::cyl_bessel_j(static_cast<double>(q), std::abs(x));
    if (order < 0 && (q & 1)) v = -v;
    if (x < 0.0 && (q & 1)) v = -v;
    return v;
}

WignerTable grating_wdf_closed_form(double m, double p, int q_max, const TableAxes& axes) {
    if (!(p > 0.0)) throw ArgumentError("grating_wdf_closed_form: pitch must be > 0");
    if (q_max < 1) throw ArgumentError("grating_wdf_closed_form: q_max must be >= 1");
    if (axes.n < 2 || !is_power_of_two(axes.n) || !(axes.dx > 0.0))
        throw ArgumentError("grating_wdf_closed_form: bad table axes");

    const int n_orders = 2 * q_max + 1;
    std::vector<double> jq(n_orders);
    double mass = 0.0;
    for (int q = -q_max; q <= q_max; ++q) {
        jq[q + q_max] = bessel_j(q, 0.5 * m);
        mass += jq[q + q_max] * jq[q + q_max];
    }
    if (mass < 1.0 - 1e-9)
        throw PrecisionError("grating_wdf_closed_form: q_max too small for series convergence");

    WignerTable w;
    w.nx = axes.n;
    w.nu = axes.n;
    w.dx = axes.dx;
    w.x0 = axes.x0;
    w.du = 1.0 / (static_cast<double>(axes.n) * axes.dx);
    w.u0 = -0.5 / axes.dx;
    w.values.assign(axes.n * axes.n, 0.0);

    const double band = 1.0 / axes.dx;  // lattice Nyquist band width
    auto fold = [band](double u) {
        double f = std::fmod(u + 0.5 * band, band);
        if (f < 0.0) f += band;
        return f - 0.5 * band;
    };

    std::vector<double> folded(n_orders);
    for (int q = -q_max; q <= q_max; ++q) folded[q + q_max] = fold(static_cast<double>(q) / p);

    const double two_pi = 2.0 * std::numbers::pi;
    for (int q1 = -q_max; q1 <= q_max; ++q1) {
        for (int q2 = -q_max; q2 <= q_max; ++q2) {
            const double coeff = jq[q1 + q_max] * jq[q2 + q_max];
            if (coeff == 0.0) continue;
            const double uc = 0.5 * (folded[q1 + q_max] + folded[q2 + q_max]);
            long bin = std::lround((uc - w.u0) / w.du);
            bin = ((bin % static_cast<long>(axes.n)) + static_cast<long>(axes.n)) %
                  static_cast<long>(axes.n);
            const double fu = folded[q1 + q_max] - folded[q2 + q_max];
            // grating phase at the grid origin uses the unfolded frequencies
            const double phase0 = two_pi * static_cast<double>(q1 - q2) * axes.x0 / p;
            for (std::size_t ix = 0; ix < axes.n; ++ix) {
                const double xr = static_cast<double>(ix) * axes.dx;
                // the conjugate (q2,q1) pair makes the sum real
                w.at(ix, static_cast<std::size_t>(bin)) +=
                    coeff * std::cos(phase0 + two_pi * xr * fu);
            }
        }
    }
    for (double& v : w.values) v /= w.du;
    return w;
}

Marginals marginals(const WignerTable& w) {
    Marginals m;
    m.intensity_x.assign(w.nx, 0.0);
    m.spectrum_u.assign(w.nu, 0.0);
    for (std::size_t ix = 0; ix < w.nx; ++ix) {
        double acc = 0.0;
        for (std::size_t iu = 0; iu < w.nu; ++iu) {
            const double v = w.at(ix, iu);
            acc += v;
            m.spectrum_u[iu] += v;
        }
        m.intensity_x[ix] = acc * w.du;
    }
    for (double& v : m.spectrum_u) v *= w.dx;
    return m;
}

void write_wigner_csv(const WignerTable& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_wigner_csv: cannot open " + path);
    out << "x_meters,u_cycles_per_meter,value\n";
    out.precision(17);
    for (std::size_t ix = 0; ix < w.nx; ++ix)
        for (std::size_t iu = 0; iu < w.nu; ++iu)
            out << w.x_at(ix) << ',' << w.u_at(iu) << ',' << w.at(ix, iu) << '\n';
}

}  // namespace wbsdf
