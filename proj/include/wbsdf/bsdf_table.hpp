#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wbsdf/microstructure.hpp"
#include "wbsdf/wigner.hpp"

namespace wbsdf {

// Statistical surface description: roughness sigma_h plus an autocorrelation,
// either the quartic local model R_h(x') = sigma_h^2 (1 - (x'/a)^4) or a
// sampled circular R_h on the table's lag lattice with R_h(0) = sigma_h^2.
struct StatisticalSurfaceSpec {
    double sigma_h = 0.0;                          // meters
    std::optional<double> quartic_a;               // meters
    std::optional<std::vector<double>> sampled_r_h;  // meters^2, circular lags

    void validate() const;
    // sigma_alpha^2 (1 - rho_h) exponent helper: 1 - rho at circular lag
    // distance |x'| given the lag pitch (sampled variant indexes directly).
    double one_minus_rho(std::size_t lag, std::size_t n, double dx) const;
};

// Statistical WBSDF (x-invariant, per incidence and wavelength):
//   W_gamma(u) = e^{-sigma_a^2} DFT[ exp{(sigma_a^2/sigma_h^2) R_h(x')} ]
// evaluated at u - sin(theta_i)/lambda, with
//   sigma_a^2 = [2 pi (sigma_h/lambda) (1 + cos theta_i)]^2.
// The two exponentials are combined before exponentiation (the intermediate
// e^{+sigma_a^2} overflows for rough surfaces); the carrier becomes an exact
// frequency shift of the lag kernel. sigma_h = 0 degenerates to a single-bin
// delta at the specular frequency. The returned table has nx = 1.
WignerTable statistical_wbsdf(const StatisticalSurfaceSpec& spec, double theta_i, double lambda,
                              const TableAxes& axes);

// Tabulated signed Wave-BSDF over (x, du_shift). Angle shift invariant:
//   eval(x, ti, to) = W(x, (s sin to - sin ti)/lambda), s=+1 transmissive, -1 reflective.
// The transport normalization is the table's own du: a bin reached by
// sampling carries weight sign(W) * sum|W| * du, which reproduces a
// unit-albedo mirror for a flat surface (u-marginal identity) and is shared
// by every table.
class Wbsdf {
  public:
    static Wbsdf from_wdf(WignerTable w, SurfaceMode mode);

    // Signed scatter coefficient; bilinear in (x, du_shift), x wraps at the
    // table tile, du_shift outside the table evaluates to 0.
    double eval(double x, double theta_i, double theta_o, double lambda) const;

    struct DirectionSample {
        double theta_o = 0.0;
        double weight = 0.0;  // signed; E[weight f(theta_o)] = sum_du W du f
        double pdf = 0.0;     // |W_bin| / sum_range |W|, exact
        std::size_t bin = 0;
    };
    // Draw a du-shift bin with probability |W|/sum|W| over the propagating
    // range for (theta_i, lambda); bins mapping to |sin theta_o| > 1 are
    // excluded and the distribution renormalized. Throws SamplingError when
    // every bin is evanescent.
    DirectionSample sample(double x, double theta_i, double lambda, double u1) const;

    // Fraction of |W| mass excluded as evanescent for this stratum.
    double evanescent_excluded_fraction(double x, double theta_i, double lambda) const;

    // Diffraction-shader far-field mode: x-integrated table at
    // u' = (sin theta_1 - sin theta_2)/lambda, linear in u'.
    double stam_far_field(double theta_1, double theta_2, double lambda) const;

    const WignerTable& table() const { return w_; }
    SurfaceMode mode() const { return mode_; }
    double tile_extent() const { return static_cast<double>(w_.nx) * w_.dx; }

  private:
    WignerTable w_;
    SurfaceMode mode_ = SurfaceMode::reflective;
    std::vector<double> abs_cdf_;      // per-x cumulative |W|
    std::vector<double> spectrum_u_;   // sum_x W dx
    std::size_t x_bin(double x) const;
    double delta_u(double theta_i, double theta_o, double lambda) const;
};

// Per-wavelength table set for spectral rendering.
struct WbsdfSet {
    SurfaceMode mode = SurfaceMode::reflective;
    std::vector<double> lambdas;
    std::vector<Wbsdf> tables;

    const Wbsdf& nearest(double lambda) const;
};

// Binary container, documented layout (all little-endian):
//   magic "WBSDF1" | u32 version=1 | u32 mode | u32 n_lambda
//   per table: f64 lambda | u32 nx | u32 nu | f64 dx,x0,du,u0 | f64 values[nx*nu]
void write_wbsdf_binary(const WbsdfSet& set, const std::string& path);
WbsdfSet read_wbsdf_binary(const std::string& path);

}  // namespace wbsdf
