#pragma once

#include <string>
#include <vector>

#include "wbsdf/errors.hpp"

namespace wbsdf::psf {

// Thin lens with a circular aperture. film_distance is derived from the
// thin-lens relation 1/f = 1/focus + 1/film.
struct LensSpec {
    double focal_length = 0.0;   // meters
    double f_number = 0.0;       // aperture diameter = f / N
    double focus_distance = 0.0; // meters

    void validate() const;
    double film_distance() const;
    double aperture_diameter() const { return focal_length / f_number; }
    // gaussian image distance of a source at depth s
    double image_distance(double source_depth) const;
    // geometric circle-of-confusion diameter on film for a defocused source
    double coc_diameter(double source_depth) const;
};

// Intensity PSF kernel: nonnegative, unit L1, square, pitch in meters on film.
struct Kernel {
    std::size_t size = 0;
    double pitch = 0.0;
    std::vector<double> values;  // size*size row-major

    double at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
};

// Pupil-function PSF: circular aperture amplitude (coverage-antialiased
// edge) carrying the exact source-to-pupil path phase, the thin-lens
// quadratic, and film-plane propagation; intensity = |FFT|^2 resampled to the
// kernel pitch and L1-normalized. Aberrations of the ideal thin lens
// (defocus, oblique astigmatism/coma from the exact distances) and
// diffraction come out of the same transform.
// The internal grid must resolve the Airy core with >= 6 samples across the
// first-zero diameter or a PrecisionError is thrown.
Kernel compute_psf(const LensSpec& lens, double source_depth, double field_angle, double lambda,
                   std::size_t kernel_size, double kernel_pitch, std::size_t pupil_samples = 1024,
                   double pupil_oversample = 4.0);

// Spatially varying PSF stack: kernels indexed by (field bucket, depth plane,
// wavelength bin). Field buckets divide the normalized image height evenly;
// depth planes are geometrically spaced between near and far.
struct PsfStack {
    std::vector<Kernel> kernels;  // [field][depth][lambda] row-major
    std::size_t n_field = 0, n_depth = 0, n_lambda = 0;
    std::vector<double> depths;   // meters, ascending
    std::vector<double> lambdas;  // meters
    double max_field_angle = 0.0; // radians

    const Kernel& at(std::size_t f, std::size_t d, std::size_t l) const {
        return kernels[(f * n_depth + d) * n_lambda + l];
    }
    std::size_t depth_plane(double depth, bool* clamped = nullptr) const;
    std::size_t field_bucket(double field_angle) const;
};

struct PsfStackSpec {
    LensSpec lens;
    std::vector<double> lambdas;
    double depth_near = 0.0, depth_far = 0.0;
    std::size_t n_depth = 8;
    std::size_t n_field = 1;
    double max_field_angle = 0.0;
    std::size_t kernel_size = 64;
    double kernel_pitch = 0.0;  // 0: pick from the widest kernel
};

PsfStack build_psf_stack(const PsfStackSpec& spec);

// Gather convolution with per-pixel kernel lookup by (field bucket, nearest
// depth plane, wavelength bin). Kernels are renormalized over the in-bounds
// taps at the image edges. Depths outside the stack clamp to the nearest
// plane and count into the returned diagnostic.
struct ApplyResult {
    std::vector<double> image;    // width*height*bins
    std::size_t clamped_depths = 0;
};
ApplyResult apply_psf(const std::vector<double>& image, std::size_t width, std::size_t height,
                      std::size_t bins, const PsfStack& stack, const std::vector<double>& depth_map,
                      double pixel_pitch);

// Multi-image PFM bundle with a JSON index.
void export_psf_stack(const PsfStack& stack, const std::string& directory);

}  // namespace wbsdf::psf
