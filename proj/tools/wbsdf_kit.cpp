// wbsdf-kit: build Wigner tables from microstructures, render wave-optics
// scenes, compute lens PSF stacks, and run the validation suite.
//
// Exit codes: 0 ok, 1 validation failure, 2 bad input, 3 scene error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "wbsdf/bsdf_table.hpp"
#include "wbsdf/image.hpp"
#include "wbsdf/microstructure.hpp"
#include "wbsdf/oracle.hpp"
#include "wbsdf/psf.hpp"
#include "wbsdf/render.hpp"
#include "wbsdf/scene_io.hpp"
#include "wbsdf/validate.hpp"
#include "wbsdf/wigner.hpp"

namespace fs = std::filesystem;
using namespace wbsdf;

namespace {

int default_threads() {
    if (const char* env = std::getenv("WBSDF_KIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

double kv_value(const std::vector<std::string>& kvs, const std::string& key, double fallback,
                bool required = false) {
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ArgumentError("expected key=value, got '" + kv + "'");
        if (kv.substr(0, eq) == key) return std::stod(kv.substr(eq + 1));
    }
    if (required) throw ArgumentError("missing required parameter '" + key + "'");
    return fallback;
}

struct WdfArgs {
    std::vector<std::string> grating, slit, dslit, binary;
    std::string heightfield;
    bool flat = false;
    std::size_t n = 512;
    double dx = 1.25e-7;
    double x0 = 0.0;
    double lambda_nm = 550.0;
    double theta_deg = 0.0;
    std::string mode = "reflective";
    std::string out = "out";
};

int cmd_wdf(const WdfArgs& a) {
    const SurfaceMode mode =
        a.mode == "transmissive" ? SurfaceMode::transmissive : SurfaceMode::reflective;
    const double lambda = a.lambda_nm * 1e-9;
    Microstructure s{Flat{}, mode, std::nullopt};
    std::string kind = "flat";
    if (!a.grating.empty()) {
        const double m = kv_value(a.grating, "m", 0.0, true);
        const double p = kv_value(a.grating, "p", 0.0, true);
        s.kind = SinusoidalGrating{grating_height_for_phase(m, lambda, mode, 0.0), p};
        kind = "sinusoidal grating";
    } else if (!a.binary.empty()) {
        s.kind = BinaryPhaseGrating{kv_value(a.binary, "depth", 0.0, true),
                                    kv_value(a.binary, "p", 0.0, true),
                                    kv_value(a.binary, "duty", 0.5)};
        kind = "binary grating";
    } else if (!a.slit.empty()) {
        s.kind = Slit{kv_value(a.slit, "w", 0.0, true)};
        kind = "slit";
    } else if (!a.dslit.empty()) {
        s.kind = DoubleSlit{kv_value(a.dslit, "w", 0.0, true), kv_value(a.dslit, "d", 0.0, true)};
        kind = "double slit";
    } else if (!a.heightfield.empty()) {
        s.kind = read_heightfield_csv(a.heightfield);
        kind = "heightfield";
    } else if (!a.flat) {
        throw ArgumentError("choose a microstructure: --flat/--grating/--slit/--double-slit/"
                            "--binary/--heightfield");
    }

    GridSpec grid{a.n, a.dx, a.x0};
    ComplexGrid t = realize(s, Wavelength{lambda}, a.theta_deg * std::numbers::pi / 180.0, grid);
    WignerTable w = wdf_1d(t);
    Marginals m = marginals(w);

    fs::create_directories(a.out);
    write_wigner_csv(w, a.out + "/table.csv");
    {
        std::ofstream mx(a.out + "/marginal_x.csv");
        mx << "x_meters,intensity\n";
        for (std::size_t i = 0; i < w.nx; ++i)
            mx << w.x_at(i) << ',' << m.intensity_x[i] << '\n';
        std::ofstream mu(a.out + "/marginal_u.csv");
        mu << "u_cycles_per_meter,spectrum\n";
        for (std::size_t i = 0; i < w.nu; ++i)
            mu << w.u_at(i) << ',' << m.spectrum_u[i] << '\n';
    }
    WbsdfSet set;
    set.mode = mode;
    set.lambdas = {lambda};
    set.tables.push_back(Wbsdf::from_wdf(w, mode));
    write_wbsdf_binary(set, a.out + "/table.wbsdf");

    // marginal-identity summary
    double worst_x = 0.0, ref = 0.0;
    for (const auto& v : t.samples) ref = std::max(ref, std::norm(v));
    for (std::size_t i = 0; i < w.nx; ++i)
        worst_x = std::max(worst_x, std::abs(m.intensity_x[i] - std::norm(t.samples[i])));
    std::vector<cdouble> spec = fft(t.samples);
    double worst_u = 0.0, sref = 0.0;
    for (const auto& v : spec) sref = std::max(sref, std::norm(v * t.dx));
    for (std::size_t iu = 0; iu < w.nu; ++iu) {
        const std::size_t mu = (iu + w.nu / 2) % w.nu;
        worst_u = std::max(worst_u, std::abs(m.spectrum_u[iu] - std::norm(spec[mu] * t.dx)));
    }
    std::cout << "wdf: " << kind << ", N=" << a.n << ", dx=" << a.dx << " m, lambda=" << a.lambda_nm
              << " nm\n";
    std::cout << "  u-marginal identity: max |sum_u W du - |t|^2| = " << worst_x << " (rel "
              << worst_x / std::max(ref, 1e-300) << ")\n";
    std::cout << "  x-marginal identity: max |sum_x W dx - |DFT|^2| = " << worst_u << " (rel "
              << worst_u / std::max(sref, 1e-300) << ")\n";

    // structure notes
    std::size_t peak_bin = 0;
    for (std::size_t iu = 1; iu < w.nu; ++iu)
        if (m.spectrum_u[iu] > m.spectrum_u[peak_bin]) peak_bin = iu;
    if (kind == "flat") {
        std::cout << "  spectrum: delta at u=0\n";
    } else {
        std::cout << "  spectrum peak at u = " << w.u_at(peak_bin) << " cycles/m\n";
    }
    std::cout << "  wrote table.csv, marginal_x.csv, marginal_u.csv, table.wbsdf to " << a.out
              << "\n";
    return 0;
}

struct RenderArgs {
    std::string scene;
    std::string out = "out";
    int spp = -1;
    long long seed = -1;
    int threads = 0;
    bool compare_uniform = false;
};

int cmd_render(const RenderArgs& a) {
    render::SceneFile sf = render::load_scene(a.scene);
    if (a.spp > 0) sf.settings.spp = a.spp;
    if (a.seed >= 0) sf.settings.seed = static_cast<std::uint64_t>(a.seed);
    sf.settings.threads = a.threads > 0 ? a.threads
                          : sf.settings.threads > 0 ? sf.settings.threads
                                                    : default_threads();
    const auto result = render::render_scene(sf.scene, sf.settings);

    fs::create_directories(a.out);
    RgbImage rgb = to_rgb(result.image);
    write_pfm(rgb, a.out + "/render.pfm");
    write_ppm(rgb, a.out + "/render.ppm");

    nlohmann::json stats;
    stats["spp"] = sf.settings.spp;
    stats["seed"] = sf.settings.seed;
    stats["threads"] = sf.settings.threads;
    stats["wall_seconds"] = result.stats.wall_seconds;
    stats["min_pixel_before_clamp"] = result.stats.min_before_clamp;
    stats["max_pixel"] = result.stats.max_value;
    stats["paraxial_rejected"] = result.stats.paraxial_rejected;
    stats["mean_pixel_variance"] = result.stats.mean_pixel_variance;
    if (a.compare_uniform) {
        render::RenderSettings alt = sf.settings;
        alt.uniform_wbsdf_sampling = true;
        const auto uni = render::render_scene(sf.scene, alt);
        const double ratio = result.stats.mean_pixel_variance > 0.0
                                 ? uni.stats.mean_pixel_variance /
                                       result.stats.mean_pixel_variance
                                 : 0.0;
        stats["uniform_mean_pixel_variance"] = uni.stats.mean_pixel_variance;
        stats["variance_ratio_uniform_over_wbsdf"] = ratio;
    }
    std::ofstream(a.out + "/stats.json") << stats.dump(2) << "\n";
    std::cout << "rendered " << sf.scene.camera.film_width << "x" << sf.scene.camera.film_height
              << " at " << sf.settings.spp << " spp in " << result.stats.wall_seconds
              << " s -> " << a.out << "/render.pfm\n";
    return 0;
}

struct ValidateArgs {
    std::string scenes = "scenes";
    std::string only;
    std::string config;
    std::string out;
    int threads = 0;
};

int cmd_validate(const ValidateArgs& a) {
    validate::Options opts;
    opts.scene_dir = a.scenes;
    opts.only = a.only;
    opts.threads = a.threads > 0 ? a.threads : default_threads();
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in) throw DataError("cannot open config " + a.config);
        nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
        if (j.contains("table")) {
            opts.grid_n = j["table"].value("n", 0);
            opts.grid_dx = j["table"].value("dx_m", 0.0);
        }
    }
    const auto results = validate::run_checks(opts);
    std::cout << validate::report_text(results);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream(a.out + "/validate.json") << validate::report_json(results) << "\n";
        std::cout << "report: " << a.out << "/validate.json\n";
    }
    std::cout << (all ? "all checks passed\n" : "validation FAILED\n");
    return all ? 0 : 1;
}

struct PsfArgs {
    double focal_mm = 50.0;
    double fnum = 5.6;
    double focus_m = 1.0;
    double depth_near = 0.5, depth_far = 2.0;
    std::size_t n_depth = 8;
    std::size_t n_field = 1;
    double max_field_deg = 0.0;
    std::vector<double> lambdas_nm = {450, 550, 650};
    std::size_t kernel_size = 64;
    double kernel_pitch_um = 2.0;
    std::string out = "out";
    std::string apply_image, depth_map;
};

int cmd_psf(const PsfArgs& a) {
    psf::PsfStackSpec spec;
    spec.lens.focal_length = a.focal_mm * 1e-3;
    spec.lens.f_number = a.fnum;
    spec.lens.focus_distance = a.focus_m;
    spec.depth_near = a.depth_near;
    spec.depth_far = a.depth_far;
    spec.n_depth = a.n_depth;
    spec.n_field = a.n_field;
    spec.max_field_angle = a.max_field_deg * std::numbers::pi / 180.0;
    for (double nm : a.lambdas_nm) spec.lambdas.push_back(nm * 1e-9);
    spec.kernel_size = a.kernel_size;
    spec.kernel_pitch = a.kernel_pitch_um * 1e-6;

    psf::PsfStack stack = psf::build_psf_stack(spec);
    fs::create_directories(a.out);
    psf::export_psf_stack(stack, a.out);
    std::cout << "psf stack: " << stack.kernels.size() << " kernels ("
              << stack.n_field << " field x " << stack.n_depth << " depth x " << stack.n_lambda
              << " lambda) -> " << a.out << "/index.json\n";

    if (!a.apply_image.empty()) {
        if (a.depth_map.empty()) throw ArgumentError("--apply needs --depth-map");
        RgbImage img = read_pfm(a.apply_image);
        std::size_t dw = 0, dh = 0;
        std::vector<float> depth = read_pfm_gray(a.depth_map, dw, dh);
        if (dw != img.width || dh != img.height)
            throw ArgumentError("depth map dimensions do not match the image");
        std::vector<double> planes(img.width * img.height * 3);
        for (std::size_t i = 0; i < img.rgb.size(); ++i) planes[i] = img.rgb[i];
        std::vector<double> dmap(depth.begin(), depth.end());
        // RGB channels map onto the stack's wavelength bins (3 expected)
        auto res = psf::apply_psf(planes, img.width, img.height, 3, stack, dmap,
                                  spec.kernel_pitch);
        RgbImage outimg;
        outimg.width = img.width;
        outimg.height = img.height;
        outimg.rgb.resize(res.image.size());
        for (std::size_t i = 0; i < res.image.size(); ++i)
            outimg.rgb[i] = static_cast<float>(res.image[i]);
        write_pfm(outimg, a.out + "/filtered.pfm");
        write_ppm(outimg, a.out + "/filtered.ppm");
        std::cout << "applied stack (" << res.clamped_depths << " clamped depths) -> " << a.out
                  << "/filtered.pfm\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wave-optics BSDF toolkit"};
    app.require_subcommand(1);

    WdfArgs wa;
    auto* wdf = app.add_subcommand("wdf", "build a Wigner table from a microstructure");
    wdf->add_option("--grating", wa.grating, "sinusoidal grating: m=<phase> p=<pitch_m>")
        ->expected(-2);
    wdf->add_option("--binary", wa.binary, "binary grating: p=.. depth=.. [duty=..]")->expected(-2);
    wdf->add_option("--slit", wa.slit, "slit: w=<width_m>")->expected(-1);
    wdf->add_option("--double-slit", wa.dslit, "double slit: w=.. d=..")->expected(-2);
    wdf->add_option("--heightfield", wa.heightfield, "heightfield CSV (x_meters,height_meters)");
    wdf->add_flag("--flat", wa.flat, "flat surface");
    wdf->add_option("--n", wa.n, "grid samples (power of two)");
    wdf->add_option("--dx", wa.dx, "sample pitch, meters");
    wdf->add_option("--x0", wa.x0, "grid origin, meters");
    wdf->add_option("--lambda", wa.lambda_nm, "wavelength, nm");
    wdf->add_option("--theta", wa.theta_deg, "incidence angle, degrees");
    wdf->add_option("--mode", wa.mode, "reflective|transmissive");
    wdf->add_option("--out", wa.out, "output directory");

    RenderArgs ra;
    auto* ren = app.add_subcommand("render", "render a scene JSON");
    ren->add_option("--scene", ra.scene, "scene file")->required();
    ren->add_option("--out", ra.out, "output directory");
    ren->add_option("--spp", ra.spp, "override samples per pixel");
    ren->add_option("--seed", ra.seed, "override seed");
    ren->add_option("--threads", ra.threads, "worker threads");
    ren->add_flag("--compare-uniform", ra.compare_uniform,
                  "also render with uniform direction sampling and report the variance ratio");

    ValidateArgs va;
    auto* val = app.add_subcommand("validate", "run the validation suite");
    val->add_option("--scenes", va.scenes, "scene directory");
    val->add_option("--only", va.only, "run a single named check");
    val->add_option("--config", va.config, "table-axes config JSON");
    val->add_option("--out", va.out, "directory for the JSON report");
    val->add_option("--threads", va.threads, "worker threads");

    PsfArgs pa;
    auto* ps = app.add_subcommand("psf", "compute a lens PSF stack");
    ps->add_option("--focal-mm", pa.focal_mm, "focal length, mm");
    ps->add_option("--fnum", pa.fnum, "f-number");
    ps->add_option("--focus-m", pa.focus_m, "focus distance, meters");
    ps->add_option("--near", pa.depth_near, "nearest depth plane, meters");
    ps->add_option("--far", pa.depth_far, "farthest depth plane, meters");
    ps->add_option("--depths", pa.n_depth, "depth plane count");
    ps->add_option("--fields", pa.n_field, "field buckets");
    ps->add_option("--max-field-deg", pa.max_field_deg, "maximum field angle, degrees");
    ps->add_option("--lambdas", pa.lambdas_nm, "wavelengths, nm");
    ps->add_option("--kernel-size", pa.kernel_size, "kernel size, pixels");
    ps->add_option("--kernel-pitch-um", pa.kernel_pitch_um, "kernel pitch, micrometers");
    ps->add_option("--out", pa.out, "output directory");
    ps->add_option("--apply", pa.apply_image, "image PFM to convolve");
    ps->add_option("--depth-map", pa.depth_map, "grayscale PFM depth map, meters");

    try {
        app.parse(argc, argv);
        if (*wdf) return cmd_wdf(wa);
        if (*ren) return cmd_render(ra);
        if (*val) return cmd_validate(va);
        if (*ps) return cmd_psf(pa);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ScopeError& e) {
        std::cerr << "scene error: " << e.what() << "\n";
        return 3;
    } catch (const ArgumentError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
