#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wbsdf/complex_grid.hpp"

namespace wbsdf {

// Real-valued signed table W(x, u) over position and spatial frequency.
// Axes are DFT-consistent: du = 1/(N dx), u bins centered on zero
// (u0 = -1/(2 dx)). Values are stored row-major with x as the outer index.
struct WignerTable {
    std::vector<double> values;  // nx * nu
    std::size_t nx = 0, nu = 0;
    double dx = 0.0, du = 0.0;
    double x0 = 0.0, u0 = 0.0;

    double at(std::size_t ix, std::size_t iu) const { return values[ix * nu + iu]; }
    double& at(std::size_t ix, std::size_t iu) { return values[ix * nu + iu]; }
    double x_at(std::size_t ix) const { return x0 + static_cast<double>(ix) * dx; }
    double u_at(std::size_t iu) const { return u0 + static_cast<double>(iu) * du; }

    void validate() const;
};

// Mutual intensity J(x, x') = t(x + x'/2) conj(t(x - x'/2)) at position index
// x_index, evaluated on the even-shift lattice x' = 2k dx so both factors land
// on samples. Out-of-domain samples are zero (opaque surround). The returned
// vector holds shifts k = -N/2 .. N/2-1, i.e. entry [k + N/2] is shift x'=2k dx.
std::vector<cdouble> mutual_intensity(const ComplexGrid& t, std::size_t x_index);

// Discrete Wigner distribution of t.
//
// W_t(x, u) = integral of t(x + x'/2) t*(x - x'/2) e^{-i 2 pi x' u} dx'
//
// Realized as the standard band-limited discrete construction: half-sample
// shifts are evaluated on the even-index sublattice of the 2x trigonometric
// (Fourier) interpolation of t, lags are treated circularly over one full
// period with half-weight endpoints, and the forward DFT carries the dx
// factor. This yields, at machine precision:
//   sum_u W(x,u) du = |t(x)|^2                   (u marginal)
//   sum_x W(x,u) dx = |T^(u)|^2                  (Fourier identity)
//   sum   W dx du   = sum |t|^2 dx               (energy)
// with T^(u) = sum_n t(x_n) e^{-i 2 pi u x_n} dx, and an exactly real table
// (imaginary residue checked against 1e-10 * max|W| before being discarded).
WignerTable wdf_1d(const ComplexGrid& t);

// WDF of a separable 2D field t(x,y) = t1(x) t2(y). Factors are recovered
// from the row/column through the largest-magnitude sample and separability
// is spot-checked to 1e-6 relative; a non-separable input is a DataError
// (use the oracle module's direct 2D propagation for those).
// The full 4D table W(x,y,u,v) is the outer product of the two returned
// tables and is never materialized.
std::pair<WignerTable, WignerTable> wdf_2d_separable(const ComplexGrid2D& t);

// Closed-form WDF of the sinusoidal phase grating t(x) = e^{i (m/2) sin(2 pi x / p)}:
//
//   W(x,u) = sum_{q1,q2} J_q1(m/2) J_q2(m/2) e^{i 2 pi (x/p)(q1-q2)}
//            delta(u - (q1+q2)/(2p))
//
// evaluated on the given table lattice. Each order frequency q/p is folded
// into the lattice Nyquist band (the sampled grating has exactly that aliased
// spectrum) and deltas land in the nearest u bin as value coeff/du; the bin
// width is the quantization error of that placement. Half-integer orders
// (q1+q2 odd) land between the physical orders and are retained.
// q_max must satisfy sum_{|q|<=q_max} J_q(m/2)^2 >= 1 - 1e-9.
struct TableAxes {
    std::size_t n = 0;   // bins in x and u
    double dx = 0.0;
    double x0 = 0.0;
};
WignerTable grating_wdf_closed_form(double m, double p, int q_max, const TableAxes& axes);

// Marginals of a Wigner table: intensity over x (sum_u W du) and spectrum
// over u (sum_x W dx).
struct Marginals {
    std::vector<double> intensity_x;
    std::vector<double> spectrum_u;
};
Marginals marginals(const WignerTable& w);

// CSV export, header "x_meters,u_cycles_per_meter,value", row-major x-outer.
void write_wigner_csv(const WignerTable& w, const std::string& path);

// Bessel function of the first kind for signed integer order.
double bessel_j(int order, double x);

}  // namespace wbsdf
