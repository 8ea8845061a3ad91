#pragma once

#include <cstdint>
#include <vector>

#include "wbsdf/bsdf_table.hpp"
#include "wbsdf/complex_grid.hpp"
#include "wbsdf/microstructure.hpp"

// Brute-force scalar-wave references the table machinery is validated
// against. Everything here is deliberately simple and O(N*M).
namespace wbsdf::oracle {

enum class Regime { fraunhofer, fresnel, huygens_direct };

struct PropagationSpec {
    Regime regime = Regime::fraunhofer;
    double z = 0.0;  // meters, required > 0 for near-field regimes
    double lambda = 0.0;
    std::vector<double> receiver;  // transverse receiver positions, monotone

    void validate() const;
};

struct FarField {
    std::vector<double> sin_theta;  // ascending, |sin theta| <= 1
    std::vector<double> intensity;  // |T^(u)|^2 at u = sin(theta)/lambda
};

// |DFT(t) dx|^2 mapped to direction space, restricted to propagating bins.
FarField far_field_intensity(const ComplexGrid& t, double lambda);

// Direct Huygens summation field(r) = sum_x t(x) e^{i 2 pi d / lambda} / d,
// d the exact Euclidean distance to the receiver point at depth z. Receiver
// and aperture sampling are checked against the maximum fringe frequency.
std::vector<cdouble> huygens_sum(const ComplexGrid& t, double z, double lambda,
                                 const std::vector<double>& receiver_points);

// Paraxial quadratic-phase variant, same receiver contract.
std::vector<cdouble> fresnel_sum(const ComplexGrid& t, double z, double lambda,
                                 const std::vector<double>& receiver_points);

std::vector<cdouble> propagate(const ComplexGrid& t, const PropagationSpec& spec);

// Circulant-PSD projection of the spec's target autocorrelation onto the
// grid: the closest realizable covariance (clamped spectrum, renormalized to
// sigma_h^2). The ensemble synthesizes from this and the statistical table it
// is compared against should too.
std::vector<double> realizable_autocorrelation(const StatisticalSurfaceSpec& spec, std::size_t n,
                                               double dx);

struct EnsembleResult {
    FarField mean_intensity;
    double sigma_h_hat = 0.0;          // sqrt(mean sample variance)
    std::vector<double> r_h_hat;       // mean circular autocorrelation, meters^2
    std::vector<double> r_h_target;    // realizable target fed to the synthesis
};

// Ensemble average of far-field intensities over Gaussian heightfields with
// the spec's (projected) autocorrelation, realized through the tangent-plane
// phase at theta_i with the incident carrier. Deterministic for fixed seed.
EnsembleResult ensemble_statistical(const StatisticalSurfaceSpec& spec, double theta_i,
                                    double lambda, int n_surfaces, std::uint64_t seed,
                                    const GridSpec& grid);

// Single-bounce OPD reference: point source -> grating patch -> receiver
// line, exact per-path length phase accumulation, summed over every grating
// sample (the uniform-sampling ground truth).
struct OpdScene {
    Microstructure structure;
    GridSpec grid;
    double lambda = 0.0;
    double source_x = 0.0, source_z = 0.0;    // point source position
    double receiver_z = 0.0;                  // receiver line depth
    std::vector<double> receiver_xs;
};

struct OpdImage {
    std::vector<double> intensity;
    // mean sample count per receiver point for a uniform estimator to reach
    // the requested relative noise (measured, not modeled)
    double mc_samples_to_noise = 0.0;
};

OpdImage opd_render_reference(const OpdScene& scene, int samples_per_dir,
                              double target_rel_noise = 0.05, std::uint64_t seed = 1);

}  // namespace wbsdf::oracle
