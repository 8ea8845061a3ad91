#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "wbsdf/image.hpp"
#include "wbsdf/psf.hpp"
#include "wbsdf/rng.hpp"

using namespace wbsdf;
using namespace wbsdf::psf;

namespace {

// first zero of the radial profile through the kernel peak, by V-fit on
// sqrt(I): linear fit on each flank of the minimum, intersected
double first_zero_radius(const Kernel& k) {
    const std::size_t c = k.size / 2;
    std::vector<double> prof(k.size - c);
    for (std::size_t j = c; j < k.size; ++j) prof[j - c] = std::sqrt(k.at(c, j));
    std::size_t jmin = 1;
    while (jmin + 1 < prof.size() && !(prof[jmin] < prof[jmin - 1] && prof[jmin] <= prof[jmin + 1]))
        ++jmin;
    // descending flank through (jmin-2, jmin-1), ascending through (jmin+1, jmin+2)
    const double s1 = prof[jmin - 1] - prof[jmin - 2];
    const double s2 = prof[jmin + 2] - prof[jmin + 1];
    const double b1 = prof[jmin - 1] - s1 * static_cast<double>(jmin - 1);
    const double b2 = prof[jmin + 1] - s2 * static_cast<double>(jmin + 1);
    const double xz = (b2 - b1) / (s1 - s2);
    return xz * k.pitch;
}

LensSpec lens_50mm(double fnum) {
    LensSpec l;
    l.focal_length = 0.05;
    l.f_number = fnum;
    l.focus_distance = 1e4;  // effectively at infinity
    return l;
}

}  // namespace

TEST_CASE("thin lens relation and CoC") {
    LensSpec l = lens_50mm(5.6);
    CHECK(1.0 / l.film_distance() + 1.0 / l.focus_distance == doctest::Approx(1.0 / l.focal_length));
    CHECK(l.coc_diameter(l.focus_distance) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(l.coc_diameter(0.4) > 0.0);
}

TEST_CASE("in-focus Airy first zero: 1.22 lambda N within 2 percent") {
    const double lambda = 550e-9;
    for (double fnum : {5.6, 11.0}) {
        LensSpec l = lens_50mm(fnum);
        Kernel k = compute_psf(l, 1e4, 0.0, lambda, 64, 1.22 * lambda * fnum / 8.0, 1024, 8.0);
        const double zf = l.film_distance();
        const double want = 1.22 * lambda * fnum * zf / l.focal_length;
        CHECK(first_zero_radius(k) == doctest::Approx(want).epsilon(0.02));
    }
    // frozen reference at F/5.6: 3.76 um
    CHECK(1.22 * 550e-9 * 5.6 == doctest::Approx(3.7576e-6).epsilon(1e-3));
}

TEST_CASE("F-number scaling of the Airy radius") {
    const double lambda = 550e-9;
    LensSpec l1 = lens_50mm(5.6), l2 = lens_50mm(11.0);
    Kernel k1 = compute_psf(l1, 1e4, 0.0, lambda, 64, 1.22 * lambda * 5.6 / 8.0, 1024, 8.0);
    Kernel k2 = compute_psf(l2, 1e4, 0.0, lambda, 64, 1.22 * lambda * 11.0 / 8.0, 1024, 8.0);
    CHECK(first_zero_radius(k2) / first_zero_radius(k1) ==
          doctest::Approx(11.0 / 5.6).epsilon(0.02));
}

TEST_CASE("Airy radius scales linearly with wavelength") {
    LensSpec l = lens_50mm(5.6);
    std::vector<double> radii;
    for (double lambda : {450e-9, 550e-9, 650e-9})
        radii.push_back(first_zero_radius(
            compute_psf(l, 1e4, 0.0, lambda, 64, 1.22 * lambda * 5.6 / 8.0, 1024, 8.0)));
    CHECK(radii[1] / radii[0] == doctest::Approx(550.0 / 450.0).epsilon(0.02));
    CHECK(radii[2] / radii[1] == doctest::Approx(650.0 / 550.0).epsilon(0.02));
}

TEST_CASE("strong defocus tends to the geometric disk within 5 percent RMS") {
    LensSpec l;
    l.focal_length = 0.05;
    l.f_number = 5.6;
    l.focus_distance = 1.0;
    const double lambda = 550e-9;
    const double source = 0.4;
    const double coc = l.coc_diameter(source);
    const double pitch = coc / 20.0;
    Kernel k = compute_psf(l, source, 0.0, lambda, 64, pitch, 2048, 2.5);

    // oracle: coverage-antialiased uniform disk, L1-normalized at kernel pitch
    std::vector<double> disk(k.size * k.size, 0.0);
    const double r = 0.5 * coc;
    const long c = static_cast<long>(k.size) / 2;
    double total = 0.0;
    for (long i = 0; i < static_cast<long>(k.size); ++i)
        for (long j = 0; j < static_cast<long>(k.size); ++j) {
            int inside = 0;
            for (int si = 0; si < 8; ++si)
                for (int sj = 0; sj < 8; ++sj) {
                    const double x = (static_cast<double>(i - c) + (si + 0.5) / 8.0 - 0.5) * k.pitch;
                    const double y = (static_cast<double>(j - c) + (sj + 0.5) / 8.0 - 0.5) * k.pitch;
                    if (x * x + y * y <= r * r) ++inside;
                }
            disk[static_cast<std::size_t>(i) * k.size + static_cast<std::size_t>(j)] =
                inside / 64.0;
            total += inside / 64.0;
        }
    for (double& v : disk) v /= total;
    double rms = 0.0, peak = 0.0;
    for (double v : disk) peak = std::max(peak, v);
    for (std::size_t i = 0; i < disk.size(); ++i) {
        const double dlt = k.values[i] - disk[i];
        rms += dlt * dlt;
    }
    rms = std::sqrt(rms / static_cast<double>(disk.size()));
    CHECK(rms / peak < 0.05);
}

TEST_CASE("off-axis kernel differs from the on-axis kernel") {
    LensSpec l;
    l.focal_length = 0.05;
    l.f_number = 5.6;
    l.focus_distance = 1.0;
    Kernel on = compute_psf(l, 1.0, 0.0, 550e-9, 48, 1e-6, 1024, 4.0);
    Kernel off = compute_psf(l, 1.0, 0.25, 550e-9, 48, 1e-6, 1024, 4.0);
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < on.values.size(); ++i) {
        diff += std::abs(on.values[i] - off.values[i]);
        norm += on.values[i];
    }
    CHECK(diff / norm > 0.05);
}

TEST_CASE("undersampled kernels are precision errors") {
    LensSpec l = lens_50mm(5.6);
    // internal oversample too low for the Airy core
    CHECK_THROWS_AS(compute_psf(l, 1e4, 0.0, 550e-9, 32, 1e-6, 512, 1.5), PrecisionError);
    // kernel pitch too coarse for an in-focus kernel
    CHECK_THROWS_AS(compute_psf(l, 1e4, 0.0, 550e-9, 32, 20e-6, 1024, 8.0), PrecisionError);
}

TEST_CASE("apply_psf: identity kernel stack reproduces the input") {
    PsfStack stack;
    stack.n_field = stack.n_depth = stack.n_lambda = 1;
    stack.depths = {1.0};
    stack.lambdas = {550e-9};
    Kernel ident;
    ident.size = 5;
    ident.pitch = 1e-5;
    ident.values.assign(25, 0.0);
    ident.values[2 * 5 + 2] = 1.0;
    stack.kernels = {ident};

    const std::size_t w = 17, h = 11;
    std::vector<double> img(w * h, 0.0);
    RngStream rng = RngStream::from(4);
    for (double& v : img) v = rng.next_double();
    std::vector<double> depth(w * h, 1.0);
    auto res = apply_psf(img, w, h, 1, stack, depth, 1e-5);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(res.image[i] == img[i]);
    CHECK(res.clamped_depths == 0);
}

TEST_CASE("apply_psf: uniform depth equals dense convolution") {
    PsfStack stack;
    stack.n_field = stack.n_depth = stack.n_lambda = 1;
    stack.depths = {2.0};
    stack.lambdas = {550e-9};
    Kernel k;
    k.size = 7;
    k.pitch = 1e-5;
    k.values.assign(49, 0.0);
    {
        RngStream rng = RngStream::from(9);
        double tot = 0.0;
        for (double& v : k.values) {
            v = rng.next_double();
            tot += v;
        }
        for (double& v : k.values) v /= tot;
    }
    stack.kernels = {k};

    const std::size_t w = 24, h = 19;
    std::vector<double> img(w * h, 0.0);
    RngStream rng = RngStream::from(10);
    for (double& v : img) v = rng.next_double();
    std::vector<double> depth(w * h, 2.0);
    auto res = apply_psf(img, w, h, 1, stack, depth, 1e-5);

    // dense convolution oracle with matching edge renormalization
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0, wsum = 0.0;
            for (long ki = -3; ki <= 3; ++ki)
                for (long kj = -3; kj <= 3; ++kj) {
                    const long sy = static_cast<long>(y) - ki;
                    const long sx = static_cast<long>(x) - kj;
                    if (sy < 0 || sy >= static_cast<long>(h) || sx < 0 ||
                        sx >= static_cast<long>(w))
                        continue;
                    const double kv = k.at(static_cast<std::size_t>(ki + 3),
                                           static_cast<std::size_t>(kj + 3));
                    acc += kv * img[static_cast<std::size_t>(sy) * w + static_cast<std::size_t>(sx)];
                    wsum += kv;
                }
            CHECK(res.image[y * w + x] == doctest::Approx(acc / wsum).epsilon(1e-9));
        }
}

TEST_CASE("apply_psf: energy conserved within 0.5 percent for interior content") {
    LensSpec l;
    l.focal_length = 0.05;
    l.f_number = 5.6;
    l.focus_distance = 1.0;
    PsfStackSpec spec;
    spec.lens = l;
    spec.lambdas = {550e-9};
    spec.depth_near = 2.0;
    spec.depth_far = 3.0;
    spec.n_depth = 3;
    spec.n_field = 1;
    spec.kernel_size = 48;
    spec.kernel_pitch = 8e-6;
    PsfStack stack = build_psf_stack(spec);
    const double pitch = stack.kernels.front().pitch;

    const std::size_t w = 96, h = 96;
    std::vector<double> img(w * h, 0.0);
    // content away from the borders by more than the kernel half-width
    for (std::size_t y = 30; y < 66; ++y)
        for (std::size_t x = 30; x < 66; ++x) img[y * w + x] = 1.0 + 0.3 * ((x + y) % 5);
    std::vector<double> depth(w * h, 2.4);
    auto res = apply_psf(img, w, h, 1, stack, depth, pitch);
    double ein = 0.0, eout = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        ein += img[i];
        eout += res.image[i];
    }
    CHECK(eout == doctest::Approx(ein).epsilon(0.005));
}

TEST_CASE("apply_psf: point source in focus reproduces the kernel") {
    LensSpec l = lens_50mm(5.6);
    PsfStack stack;
    stack.n_field = stack.n_depth = stack.n_lambda = 1;
    stack.depths = {1e4};
    stack.lambdas = {550e-9};
    stack.kernels = {compute_psf(l, 1e4, 0.0, 550e-9, 33, 1.22 * 550e-9 * 5.6 / 8.0, 1024, 8.0)};
    const Kernel& k = stack.kernels[0];

    const std::size_t w = 65, h = 65;
    std::vector<double> img(w * h, 0.0);
    img[(h / 2) * w + (w / 2)] = 1.0;
    std::vector<double> depth(w * h, 1e4);
    auto res = apply_psf(img, w, h, 1, stack, depth, k.pitch);
    for (std::size_t i = 0; i < k.size; ++i)
        for (std::size_t j = 0; j < k.size; ++j) {
            const std::size_t y = h / 2 - k.size / 2 + i;
            const std::size_t x = w / 2 - k.size / 2 + j;
            CHECK(res.image[y * w + x] ==
                  doctest::Approx(k.at(k.size - 1 - i, k.size - 1 - j)).epsilon(1e-6));
        }
}

TEST_CASE("apply_psf: depth outside the stack clamps with a diagnostic") {
    PsfStack stack;
    stack.n_field = stack.n_depth = stack.n_lambda = 1;
    stack.depths = {1.0};
    stack.lambdas = {550e-9};
    Kernel ident;
    ident.size = 3;
    ident.pitch = 1e-5;
    ident.values = {0, 0, 0, 0, 1, 0, 0, 0, 0};
    stack.kernels = {ident};
    std::vector<double> img(25, 1.0);
    std::vector<double> depth(25, 5.0);
    auto res = apply_psf(img, 5, 5, 1, stack, depth, 1e-5);
    CHECK(res.clamped_depths == 25);
}

TEST_CASE("psf stack export writes kernels and an index") {
    LensSpec l;
    l.focal_length = 0.05;
    l.f_number = 5.6;
    l.focus_distance = 1.0;
    PsfStackSpec spec;
    spec.lens = l;
    spec.lambdas = {450e-9, 650e-9};
    spec.depth_near = 0.9;
    spec.depth_far = 1.2;
    spec.n_depth = 2;
    spec.n_field = 1;
    spec.kernel_size = 16;
    spec.kernel_pitch = 4e-6;
    PsfStack stack = build_psf_stack(spec);

    const std::string dir = "psf_export_test";
    std::filesystem::create_directories(dir);
    export_psf_stack(stack, dir);
    CHECK(std::filesystem::exists(dir + "/index.json"));
    CHECK(std::filesystem::exists(dir + "/psf_f0_d0_l0.pfm"));
    CHECK(std::filesystem::exists(dir + "/psf_f0_d1_l1.pfm"));
    std::size_t w = 0, h = 0;
    auto data = read_pfm_gray(dir + "/psf_f0_d0_l0.pfm", w, h);
    CHECK(w == 16);
    CHECK(h == 16);
    double tot = 0.0;
    for (float v : data) tot += v;
    CHECK(tot == doctest::Approx(1.0).epsilon(1e-5));
    std::filesystem::remove_all(dir);
}
