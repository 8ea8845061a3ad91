#include "wbsdf/psf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"

#include "wbsdf/fft.hpp"
#include "wbsdf/image.hpp"

namespace wbsdf::psf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void LensSpec::validate() const {
    if (!(focal_length > 0.0) || !(f_number > 0.0) || !(focus_distance > focal_length))
        throw ArgumentError("LensSpec: need focal_length > 0, f_number > 0, focus_distance > f");
}

double LensSpec::film_distance() const {
    return 1.0 / (1.0 / focal_length - 1.0 / focus_distance);
}

double LensSpec::image_distance(double source_depth) const {
    if (!(source_depth > focal_length))
        throw ArgumentError("LensSpec: source depth must exceed the focal length");
    return 1.0 / (1.0 / focal_length - 1.0 / source_depth);
}

double LensSpec::coc_diameter(double source_depth) const {
    const double zi = image_distance(source_depth);
    return aperture_diameter() * std::abs(film_distance() - zi) / zi;
}

Kernel compute_psf(const LensSpec& lens, double source_depth, double field_angle, double lambda,
                   std::size_t kernel_size, double kernel_pitch, std::size_t pupil_samples,
                   double pupil_oversample) {
    lens.validate();
    if (!(lambda > 0.0)) throw ArgumentError("compute_psf: lambda must be > 0");
    if (kernel_size < 4 || !(kernel_pitch > 0.0))
        throw ArgumentError("compute_psf: bad kernel shape");
    if (!is_power_of_two(pupil_samples))
        throw ArgumentError("compute_psf: pupil_samples must be a power of two");

    const double zf = lens.film_distance();
    const double D = lens.aperture_diameter();
    const double a = 0.5 * D;
    const double airy_zero = 1.22 * lambda * lens.f_number * zf / lens.focal_length;
    const double pitch_fft = lambda * zf / (pupil_oversample * D);
    if (pitch_fft > airy_zero / 3.0)
        throw PrecisionError("compute_psf: internal grid undersamples the Airy core (< 6 samples across the first zero)");
    const double feature = std::max(airy_zero, 0.5 * lens.coc_diameter(source_depth));
    if (kernel_pitch > feature / 3.0)
        throw PrecisionError("compute_psf: kernel pitch undersamples the dominant feature");

    const std::size_t P = pupil_samples;
    const double d = pupil_oversample * D / static_cast<double>(P);
    const double k = kTwoPi / lambda;

    // source point and its gaussian image (chief-ray centering)
    const double u0 = source_depth * std::tan(field_angle);
    const double zi = lens.image_distance(source_depth);
    const double v0 = -u0 * zi / source_depth;
    const double chief = std::hypot(u0, source_depth);

    std::vector<cdouble> pupil(P * P, cdouble(0, 0));
    const long half = static_cast<long>(P) / 2;
    for (long i = 0; i < static_cast<long>(P); ++i) {
        const double x = static_cast<double>(i - half) * d;
        for (long j = 0; j < static_cast<long>(P); ++j) {
            const double y = static_cast<double>(j - half) * d;
            const double r2 = x * x + y * y;
            // coverage-antialiased aperture edge
            double amp;
            const double r = std::sqrt(r2);
            if (r <= a - d)
                amp = 1.0;
            else if (r >= a + d)
                amp = 0.0;
            else {
                int inside = 0;
                for (int si = 0; si < 4; ++si)
                    for (int sj = 0; sj < 4; ++sj) {
                        const double sx = x + ((si + 0.5) / 4.0 - 0.5) * d;
                        const double sy = y + ((sj + 0.5) / 4.0 - 0.5) * d;
                        if (sx * sx + sy * sy <= a * a) ++inside;
                    }
                amp = inside / 16.0;
            }
            if (amp == 0.0) continue;
            // exact source path minus the chief ray, computed without
            // cancellation: d1 - chief = (x^2 + y^2 - 2 x u0) / (d1 + chief)
            const double d1 = std::sqrt((x - u0) * (x - u0) + y * y +
                                        source_depth * source_depth);
            const double excess = (r2 - 2.0 * x * u0) / (d1 + chief);
            double phase = k * excess - 0.5 * k * r2 / lens.focal_length +
                           0.5 * k * r2 / zf;
            // shift the film window onto the gaussian image point
            phase += k * x * v0 / zf;
            pupil[static_cast<std::size_t>(i) * P + static_cast<std::size_t>(j)] =
                std::polar(amp, phase);
        }
    }
    fft2_inplace(pupil.data(), P, P, false);

    // |FFT|^2 with the DC bin moved to the window center
    const std::size_t ratio_sz = static_cast<std::size_t>(
        std::max(1L, std::lround(kernel_pitch / pitch_fft)));
    const double actual_pitch = static_cast<double>(ratio_sz) * pitch_fft;
    if (kernel_size * ratio_sz > P)
        throw ArgumentError("compute_psf: kernel window exceeds the computed field");

    Kernel kern;
    kern.size = kernel_size;
    kern.pitch = actual_pitch;
    kern.values.assign(kernel_size * kernel_size, 0.0);
    // center the middle kernel pixel on the FFT DC bin (fine index 0)
    const long base = -static_cast<long>(kernel_size / 2 * ratio_sz) -
                      static_cast<long>(ratio_sz / 2);
    for (std::size_t ki = 0; ki < kernel_size; ++ki) {
        for (std::size_t kj = 0; kj < kernel_size; ++kj) {
            double acc = 0.0;
            for (std::size_t si = 0; si < ratio_sz; ++si) {
                const long fi = base + static_cast<long>(ki * ratio_sz + si);
                const std::size_t ii =
                    static_cast<std::size_t>(((fi % static_cast<long>(P)) + static_cast<long>(P)) %
                                             static_cast<long>(P));
                for (std::size_t sj = 0; sj < ratio_sz; ++sj) {
                    const long fj = base + static_cast<long>(kj * ratio_sz + sj);
                    const std::size_t jj = static_cast<std::size_t>(
                        ((fj % static_cast<long>(P)) + static_cast<long>(P)) %
                        static_cast<long>(P));
                    acc += std::norm(pupil[ii * P + jj]);
                }
            }
            kern.values[ki * kernel_size + kj] = acc;
        }
    }
    double total = 0.0;
    for (double v : kern.values) total += v;
    if (!(total > 0.0)) throw ConsistencyError("compute_psf: empty kernel");
    for (double& v : kern.values) v /= total;
    return kern;
}

std::size_t PsfStack::depth_plane(double depth, bool* clamped) const {
    if (clamped) *clamped = false;
    if (depths.empty()) throw DataError("PsfStack: no depth planes");
    if (depth <= depths.front()) {
        if (clamped && depth < depths.front() * (1.0 - 1e-9)) *clamped = true;
        return 0;
    }
    if (depth >= depths.back()) {
        if (clamped && depth > depths.back() * (1.0 + 1e-9)) *clamped = true;
        return depths.size() - 1;
    }
    // geometric spacing: nearest in log space
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < depths.size(); ++i) {
        const double dd = std::abs(std::log(depth / depths[i]));
        if (dd < bd) {
            bd = dd;
            best = i;
        }
    }
    return best;
}

std::size_t PsfStack::field_bucket(double field_angle) const {
    if (n_field <= 1 || max_field_angle <= 0.0) return 0;
    const double t = std::clamp(std::abs(field_angle) / max_field_angle, 0.0, 1.0);
    return std::min(static_cast<std::size_t>(t * static_cast<double>(n_field)), n_field - 1);
}

PsfStack build_psf_stack(const PsfStackSpec& spec) {
    spec.lens.validate();
    if (spec.lambdas.empty()) throw ArgumentError("build_psf_stack: no wavelengths");
    if (!(spec.depth_near > spec.lens.focal_length) || !(spec.depth_far >= spec.depth_near))
        throw ArgumentError("build_psf_stack: bad depth range");
    if (spec.n_depth == 0 || spec.n_field == 0) throw ArgumentError("build_psf_stack: zero planes");
    if (!(spec.kernel_pitch > 0.0)) throw ArgumentError("build_psf_stack: kernel_pitch required");

    PsfStack stack;
    stack.n_field = spec.n_field;
    stack.n_depth = spec.n_depth;
    stack.n_lambda = spec.lambdas.size();
    stack.lambdas = spec.lambdas;
    stack.max_field_angle = spec.max_field_angle;
    stack.depths.resize(spec.n_depth);
    for (std::size_t i = 0; i < spec.n_depth; ++i) {
        const double t = spec.n_depth == 1
                             ? 0.0
                             : static_cast<double>(i) / static_cast<double>(spec.n_depth - 1);
        stack.depths[i] = spec.depth_near * std::pow(spec.depth_far / spec.depth_near, t);
    }
    for (std::size_t f = 0; f < spec.n_field; ++f) {
        const double angle = spec.n_field == 1
                                 ? 0.0
                                 : (static_cast<double>(f) + 0.5) * spec.max_field_angle /
                                       static_cast<double>(spec.n_field);
        for (std::size_t di = 0; di < spec.n_depth; ++di)
            for (std::size_t li = 0; li < spec.lambdas.size(); ++li)
                stack.kernels.push_back(compute_psf(spec.lens, stack.depths[di], angle,
                                                    spec.lambdas[li], spec.kernel_size,
                                                    spec.kernel_pitch));
    }
    return stack;
}

ApplyResult apply_psf(const std::vector<double>& image, std::size_t width, std::size_t height,
                      std::size_t bins, const PsfStack& stack, const std::vector<double>& depth_map,
                      double pixel_pitch) {
    if (image.size() != width * height * bins) throw ArgumentError("apply_psf: image size mismatch");
    if (depth_map.size() != width * height)
        throw ArgumentError("apply_psf: depth map and image must be congruent");
    if (bins != stack.n_lambda && stack.n_lambda != 1)
        throw ArgumentError("apply_psf: spectral layout mismatch with the stack");
    const Kernel& probe = stack.kernels.front();
    if (std::abs(probe.pitch - pixel_pitch) > 1e-9 * pixel_pitch)
        throw ArgumentError("apply_psf: stack kernel pitch must match the image pixel pitch");

    ApplyResult out;
    out.image.assign(width * height * bins, 0.0);

    const double cx = 0.5 * static_cast<double>(width - 1);
    const double cy = 0.5 * static_cast<double>(height - 1);
    const double half_diag = std::hypot(cx, cy) * pixel_pitch;

    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const std::size_t p = y * width + x;
            bool clamped = false;
            const std::size_t dplane = stack.depth_plane(depth_map[p], &clamped);
            if (clamped) ++out.clamped_depths;
            // field angle from the normalized image height
            double fangle = 0.0;
            if (stack.max_field_angle > 0.0 && half_diag > 0.0) {
                const double r = std::hypot((static_cast<double>(x) - cx) * pixel_pitch,
                                            (static_cast<double>(y) - cy) * pixel_pitch);
                fangle = r / half_diag * stack.max_field_angle;
            }
            const std::size_t fb = stack.field_bucket(fangle);
            for (std::size_t b = 0; b < bins; ++b) {
                const Kernel& k = stack.at(fb, dplane, stack.n_lambda == 1 ? 0 : b);
                const long h = static_cast<long>(k.size) / 2;
                double acc = 0.0, wsum = 0.0;
                for (long ki = -h; ki < static_cast<long>(k.size) - h; ++ki) {
                    const long sy = static_cast<long>(y) - ki;
                    if (sy < 0 || sy >= static_cast<long>(height)) continue;
                    for (long kj = -h; kj < static_cast<long>(k.size) - h; ++kj) {
                        const long sx = static_cast<long>(x) - kj;
                        if (sx < 0 || sx >= static_cast<long>(width)) continue;
                        const double kv = k.at(static_cast<std::size_t>(ki + h),
                                               static_cast<std::size_t>(kj + h));
                        acc += kv * image[(static_cast<std::size_t>(sy) * width +
                                           static_cast<std::size_t>(sx)) *
                                              bins +
                                          b];
                        wsum += kv;
                    }
                }
                out.image[p * bins + b] = wsum > 0.0 ? acc / wsum : 0.0;
            }
        }
    }
    return out;
}

void export_psf_stack(const PsfStack& stack, const std::string& directory) {
    nlohmann::json index;
    index["version"] = 1;
    index["n_field"] = stack.n_field;
    index["n_depth"] = stack.n_depth;
    index["n_lambda"] = stack.n_lambda;
    index["depths_m"] = stack.depths;
    index["lambdas_m"] = stack.lambdas;
    index["max_field_angle_rad"] = stack.max_field_angle;
    nlohmann::json files = nlohmann::json::array();
    for (std::size_t f = 0; f < stack.n_field; ++f)
        for (std::size_t d = 0; d < stack.n_depth; ++d)
            for (std::size_t l = 0; l < stack.n_lambda; ++l) {
                const Kernel& k = stack.at(f, d, l);
                const std::string name = "psf_f" + std::to_string(f) + "_d" + std::to_string(d) +
                                         "_l" + std::to_string(l) + ".pfm";
                std::vector<float> data(k.values.begin(), k.values.end());
                write_pfm_gray(data, k.size, k.size, directory + "/" + name);
                files.push_back({{"file", name},
                                 {"field", f},
                                 {"depth_index", d},
                                 {"lambda_index", l},
                                 {"size", k.size},
                                 {"pitch_m", k.pitch}});
            }
    index["kernels"] = files;
    std::ofstream out(directory + "/index.json");
    if (!out) throw DataError("export_psf_stack: cannot open index in " + directory);
    out << index.dump(2) << "\n";
}

}  // namespace wbsdf::psf
