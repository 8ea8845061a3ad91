#include "wbsdf/render.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "wbsdf/rng.hpp"

namespace wbsdf::render {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kRayEps = 1e-7;
}  // namespace

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
Vec3 normalized(Vec3 v) {
    const double n = norm(v);
    return {v.x / n, v.y / n, v.z / n};
}

void Scene::validate() const {
    if (lambdas.empty()) throw ScopeError("scene: no spectral bins");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        Wavelength{lambdas[i]}.validate();
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw ScopeError("scene: spectral bins must ascend");
    }
    if (!(camera.aperture_radius > 0.0))
        throw ScopeError("scene: pinhole camera forbidden (aperture_radius must be > 0)");
    if (camera.film_width == 0 || camera.film_height == 0 || !(camera.pixel_pitch > 0.0))
        throw ScopeError("scene: degenerate film");
    if (!(camera.focus_distance > camera.focal_length))
        throw ScopeError("scene: focus distance must exceed the focal length");
    for (const Patch& p : patches) {
        if (norm(cross(p.e1, p.e2)) <= 0.0)
            throw ScopeError("scene: degenerate patch '" + p.name + "'");
        if (std::abs(dot(normalized(p.e1), normalized(p.e2))) > 1e-9)
            throw ScopeError("scene: patch edges must be orthogonal ('" + p.name + "')");
        if (p.material < 0 || p.material >= static_cast<int>(materials.size()))
            throw ScopeError("scene: patch '" + p.name + "' references a missing material");
        const Material& m = materials[static_cast<std::size_t>(p.material)];
        if (m.kind == MaterialKind::wbsdf && (!m.tables || m.tables->tables.empty()))
            throw ScopeError("scene: wbsdf material '" + m.name + "' is missing its table");
        if (m.kind == MaterialKind::diffuse && m.albedo.size() != lambdas.size())
            throw ScopeError("scene: diffuse material '" + m.name +
                             "' albedo bins do not match the spectral layout");
    }
    for (const AreaLight& l : area_lights) {
        if (norm(cross(l.e1, l.e2)) <= 0.0) throw ScopeError("scene: degenerate area light");
        if (l.radiance.size() != lambdas.size())
            throw ScopeError("scene: area light radiance bins do not match the spectral layout");
    }
    for (const PointLight& l : point_lights)
        if (l.intensity.size() != lambdas.size())
            throw ScopeError("scene: point light intensity bins do not match the spectral layout");
}

std::vector<int> Scene::coherence_groups() const {
    std::vector<int> g;
    for (const auto& l : point_lights) g.push_back(l.coherence_group);
    for (const auto& l : area_lights) g.push_back(l.coherence_group);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

namespace {

struct Frame {
    Vec3 g, t, n;  // grating axis, extruded axis, normal
};

Frame patch_frame(const Patch& p) {
    Frame f;
    f.g = normalized(p.e1);
    f.t = normalized(p.e2);
    f.n = normalized(cross(p.e1, p.e2));
    return f;
}

struct Hit {
    double t = std::numeric_limits<double>::infinity();
    int patch = -1;      // scene patch index
    int area_light = -1; // or emitter index
    double a = 0.0, b = 0.0;
};

bool intersect_rect(Vec3 o, Vec3 d, Vec3 q0, Vec3 e1, Vec3 e2, double& t, double& a, double& b) {
    const Vec3 n = cross(e1, e2);
    const double denom = dot(d, n);
    if (std::abs(denom) < 1e-15) return false;
    const double tt = dot(q0 - o, n) / denom;
    if (tt <= kRayEps) return false;
    const Vec3 p = o + tt * d - q0;
    const double l1 = dot(e1, e1), l2 = dot(e2, e2);
    const double aa = dot(p, e1) / l1;
    const double bb = dot(p, e2) / l2;
    if (aa < 0.0 || aa > 1.0 || bb < 0.0 || bb > 1.0) return false;
    t = tt;
    a = aa;
    b = bb;
    return true;
}

Hit intersect_scene(const Scene& scene, Vec3 o, Vec3 d) {
    Hit h;
    for (std::size_t i = 0; i < scene.patches.size(); ++i) {
        double t, a, b;
        if (intersect_rect(o, d, scene.patches[i].origin, scene.patches[i].e1,
                           scene.patches[i].e2, t, a, b) &&
            t < h.t) {
            h.t = t;
            h.patch = static_cast<int>(i);
            h.area_light = -1;
            h.a = a;
            h.b = b;
        }
    }
    for (std::size_t i = 0; i < scene.area_lights.size(); ++i) {
        double t, a, b;
        if (intersect_rect(o, d, scene.area_lights[i].origin, scene.area_lights[i].e1,
                           scene.area_lights[i].e2, t, a, b) &&
            t < h.t) {
            h.t = t;
            h.patch = -1;
            h.area_light = static_cast<int>(i);
            h.a = a;
            h.b = b;
        }
    }
    return h;
}

// segment visibility between two points, excluding one area light index
bool visible(const Scene& scene, Vec3 from, Vec3 to, int skip_light = -1) {
    const Vec3 d = to - from;
    const double len = norm(d);
    const Vec3 dn = {d.x / len, d.y / len, d.z / len};
    for (const Patch& p : scene.patches) {
        double t, a, b;
        if (intersect_rect(from, dn, p.origin, p.e1, p.e2, t, a, b) && t < len - kRayEps)
            return false;
    }
    for (std::size_t i = 0; i < scene.area_lights.size(); ++i) {
        if (static_cast<int>(i) == skip_light) continue;
        const AreaLight& l = scene.area_lights[i];
        double t, a, b;
        if (intersect_rect(from, dn, l.origin, l.e1, l.e2, t, a, b) && t < len - kRayEps)
            return false;
    }
    return true;
}

double spot_factor(const PointLight& l, Vec3 toward) {
    if (!l.is_spot) return 1.0;
    return dot(normalized(toward), normalized(l.spot_direction)) >= l.spot_cos_half ? 1.0 : 0.0;
}

// Depth-1 diffractive connection: diffuse vertex p <- wbsdf patch <- point
// light. The extruded axis behaves specularly, so for each stratum along the
// grating axis the connection point is pinned by the beta-matching root and
// its delta collapses into the 1/J_b jacobian; the grating axis carries the
// signed table kernel per unit direction cosine, W(x, du)/lambda.
double diffraction_nee(const Scene& scene, const RenderSettings& settings, Vec3 p_vertex,
                       Vec3 n_vertex, const Patch& patch, const Material& mat,
                       const PointLight& light, std::size_t bin, RngStream& rng) {
    const Frame f = patch_frame(patch);
    const double lambda = scene.lambdas[bin];
    const Wbsdf& table = mat.tables->nearest(lambda);
    const bool reflective = table.mode() == SurfaceMode::reflective;
    const double len1 = norm(patch.e1);

    const double side_p = dot(p_vertex - patch.origin, f.n);
    const double side_l = dot(light.position - patch.origin, f.n);
    if (reflective) {
        if (side_p * side_l <= 0.0) return 0.0;
    } else {
        if (side_p * side_l >= 0.0) return 0.0;
    }

    const double cos_limit = std::cos(mat.paraxial_limit);
    const double len2 = norm(patch.e2);
    double acc = 0.0;
    const int strata = std::max(1, settings.nee_strata);
    for (int s = 0; s < strata; ++s) {
        const double a = (static_cast<double>(s) + rng.next_double()) / strata;

        // beta-matching root along the extruded axis (monotone, bisection);
        // both distances are quadratics in b, precomputed per stratum
        const Vec3 q0 = patch.origin + a * patch.e1;
        const Vec3 to_p0 = p_vertex - q0;
        const Vec3 to_l0 = light.position - q0;
        const double p_t = dot(to_p0, f.t), p_sq = dot(to_p0, to_p0);
        const double l_t = dot(to_l0, f.t), l_sq = dot(to_l0, to_l0);
        auto beta_gap = [&](double b) {
            const double bb = b * len2;
            const double ro = std::sqrt(std::max(p_sq - 2.0 * bb * p_t + bb * bb, 1e-300));
            const double ri = std::sqrt(std::max(l_sq - 2.0 * bb * l_t + bb * bb, 1e-300));
            return (p_t - bb) / ro + (l_t - bb) / ri;  // beta_o - beta_i
        };
        double lo = 0.0, hi = 1.0;
        double flo = beta_gap(lo);
        const double fhi0 = beta_gap(hi);
        if (flo == 0.0 && fhi0 == 0.0) continue;  // degenerate alignment
        if (flo * fhi0 > 0.0) continue;           // no specular point on the patch
        for (int it = 0; it < 24; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = beta_gap(mid);
            if (flo * fm <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        const double b = 0.5 * (lo + hi);
        const Vec3 q = q0 + b * patch.e2;

        const Vec3 to_p = p_vertex - q;
        const double r = norm(to_p);
        const Vec3 wo = {to_p.x / r, to_p.y / r, to_p.z / r};
        const Vec3 from_l = q - light.position;
        const double dl = norm(from_l);
        const Vec3 wi = {from_l.x / dl, from_l.y / dl, from_l.z / dl};

        const double gamma_i = dot(wi, f.n), gamma_o = dot(wo, f.n);
        if (std::abs(gamma_i) < cos_limit || std::abs(gamma_o) < cos_limit) continue;
        if (spot_factor(light, from_l) == 0.0) continue;
        if (!visible(scene, light.position, q) || !visible(scene, q, p_vertex)) continue;

        const double alpha_i = dot(wi, f.g);
        const double alpha_o = dot(wo, f.g);
        const double beta_i = dot(wi, f.t);
        const double beta_o = dot(wo, f.t);

        // table lookup via the angle contract: sin(theta_o)=+-alpha_o; the
        // patch corner maps to the table origin and the tile wraps
        const double x_tbl = table.table().x0 + a * len1;
        const double ti = std::asin(std::clamp(alpha_i, -1.0, 1.0));
        const double to = std::asin(std::clamp(reflective ? -alpha_o : alpha_o, -1.0, 1.0));
        const double k_alpha = table.eval(x_tbl, ti, to, lambda) / lambda;
        if (k_alpha == 0.0) continue;

        const double jb = (1.0 - beta_o * beta_o) / r + (1.0 - beta_i * beta_i) / dl;
        const double cos_p = std::max(0.0, dot({-wo.x, -wo.y, -wo.z}, n_vertex));
        const double term = light.intensity[bin] * std::abs(gamma_i) / (dl * dl) * k_alpha *
                            std::abs(gamma_o) * cos_p / (r * r) / jb;
        acc += term;
    }
    return acc * len1 / static_cast<double>(strata);
}

struct PathContext {
    const Scene& scene;
    const RenderSettings& settings;
    std::size_t bin;
    int group;
    double* paraxial_rejected;
};

double trace_path(const PathContext& ctx, Vec3 origin, Vec3 dir, RngStream& rng) {
    const Scene& scene = ctx.scene;
    const double lambda = scene.lambdas[ctx.bin];
    double beta = 1.0;
    double radiance = 0.0;
    bool prev_specular = true;  // camera rays count emitter hits

    for (int depth = 0; depth < ctx.settings.max_depth; ++depth) {
        const Hit hit = intersect_scene(scene, origin, dir);
        if (hit.area_light >= 0) {
            const AreaLight& l = scene.area_lights[static_cast<std::size_t>(hit.area_light)];
            if (l.coherence_group == ctx.group && prev_specular) {
                const Vec3 nl = normalized(cross(l.e1, l.e2));
                if (dot(nl, dir) < 0.0) radiance += beta * l.radiance[ctx.bin];
            }
            break;  // emitters absorb
        }
        if (hit.patch < 0) break;

        const Patch& patch = scene.patches[static_cast<std::size_t>(hit.patch)];
        const Material& mat = scene.materials[static_cast<std::size_t>(patch.material)];
        const Vec3 p = origin + hit.t * dir;
        const Frame f = patch_frame(patch);
        Vec3 n = f.n;
        if (dot(n, dir) > 0.0) n = {-n.x, -n.y, -n.z};  // face the incoming side

        if (mat.kind == MaterialKind::diffuse) {
            const double rho = mat.albedo[ctx.bin];
            // point/spot lights: direct connections
            for (const PointLight& l : scene.point_lights) {
                if (l.coherence_group != ctx.group) continue;
                const Vec3 to_l = l.position - p;
                const double d2 = dot(to_l, to_l);
                const double d = std::sqrt(d2);
                const Vec3 wl = {to_l.x / d, to_l.y / d, to_l.z / d};
                const double cos_p = dot(wl, n);
                if (cos_p <= 0.0) continue;
                if (spot_factor(l, {-to_l.x, -to_l.y, -to_l.z}) == 0.0) continue;
                if (!visible(scene, p + kRayEps * n, l.position)) continue;
                radiance += beta * (rho / kPi) * l.intensity[ctx.bin] * cos_p / d2;
            }
            // area lights: one area sample each
            for (std::size_t li = 0; li < scene.area_lights.size(); ++li) {
                const AreaLight& l = scene.area_lights[li];
                if (l.coherence_group != ctx.group) continue;
                const double ua = rng.next_double(), ub = rng.next_double();
                const Vec3 y = l.origin + ua * l.e1 + ub * l.e2;
                const Vec3 nl = normalized(cross(l.e1, l.e2));
                const Vec3 to_y = y - p;
                const double d2 = dot(to_y, to_y);
                const double d = std::sqrt(d2);
                const Vec3 wy = {to_y.x / d, to_y.y / d, to_y.z / d};
                const double cos_p = dot(wy, n);
                const double cos_y = -dot(wy, nl);
                if (cos_p <= 0.0 || cos_y <= 0.0) continue;
                if (!visible(scene, p + kRayEps * n, y, static_cast<int>(li))) continue;
                const double area = norm(cross(l.e1, l.e2));
                radiance += beta * (rho / kPi) * l.radiance[ctx.bin] * cos_p * cos_y * area / d2;
            }
            // depth-1 diffraction connections through every wbsdf patch
            for (const Patch& wp : scene.patches) {
                if (wp.material < 0) continue;
                const Material& wm = scene.materials[static_cast<std::size_t>(wp.material)];
                if (wm.kind != MaterialKind::wbsdf) continue;
                for (const PointLight& l : scene.point_lights) {
                    if (l.coherence_group != ctx.group) continue;
                    radiance += beta * (rho / kPi) *
                                diffraction_nee(scene, ctx.settings, p, n, wp, wm, l, ctx.bin, rng);
                }
            }
            // cosine-weighted continuation
            const double u1 = rng.next_double(), u2 = rng.next_double();
            const double cr = std::sqrt(u1);
            const double phi = 2.0 * kPi * u2;
            Vec3 tx = std::abs(n.z) < 0.9 ? cross(n, Vec3{0, 0, 1}) : cross(n, Vec3{1, 0, 0});
            tx = normalized(tx);
            const Vec3 ty = cross(n, tx);
            dir = normalized(cr * std::cos(phi) * tx + cr * std::sin(phi) * ty +
                             std::sqrt(std::max(0.0, 1.0 - u1)) * n);
            origin = p + kRayEps * n;
            beta *= rho;
            prev_specular = false;
        } else if (mat.kind == MaterialKind::mirror) {
            dir = dir - 2.0 * dot(dir, f.n) * f.n;
            origin = p + kRayEps * (dot(dir, n) > 0 ? n : Vec3{-n.x, -n.y, -n.z});
            prev_specular = true;
        } else {
            // wbsdf patch: separable transport; diffraction along e1, the
            // extruded axis keeps its direction cosine
            const double lam = lambda;
            const Wbsdf& table = mat.tables->nearest(lam);
            const bool reflective = table.mode() == SurfaceMode::reflective;
            const double gamma_in = dot(dir, f.n);
            if (std::acos(std::min(1.0, std::abs(gamma_in))) > mat.paraxial_limit) {
                if (ctx.paraxial_rejected) *ctx.paraxial_rejected += std::abs(beta);
                break;
            }
            const double alpha_i = dot(dir, f.g);
            const double beta_t = dot(dir, f.t);
            const double x_local = table.table().x0 + hit.a * norm(patch.e1);

            double alpha_o, w;
            if (ctx.settings.uniform_wbsdf_sampling) {
                alpha_o = -1.0 + 2.0 * rng.next_double();
                const double ti = std::asin(std::clamp(alpha_i, -1.0, 1.0));
                const double to =
                    std::asin(std::clamp(reflective ? -alpha_o : alpha_o, -1.0, 1.0));
                w = table.eval(x_local, ti, to, lam) / lam * 2.0;
            } else {
                Wbsdf::DirectionSample smp;
                try {
                    smp = table.sample(x_local, std::asin(std::clamp(alpha_i, -1.0, 1.0)), lam,
                                       rng.next_double());
                } catch (const SamplingError&) {
                    break;  // fully evanescent stratum: absorbed
                }
                alpha_o = (reflective ? -1.0 : 1.0) * std::sin(smp.theta_o);
                w = smp.weight;
            }
            const double g2 = 1.0 - alpha_o * alpha_o - beta_t * beta_t;
            if (g2 <= 0.0 || w == 0.0) {
                if (ctx.paraxial_rejected && w != 0.0)
                    *ctx.paraxial_rejected += std::abs(beta * w);
                break;
            }
            const double gamma_o =
                std::sqrt(g2) * (reflective ? -(gamma_in > 0 ? 1.0 : -1.0)
                                            : (gamma_in > 0 ? 1.0 : -1.0));
            const double out_angle = std::acos(std::min(1.0, std::abs(gamma_o)));
            if (out_angle > mat.paraxial_limit) {
                if (ctx.paraxial_rejected) *ctx.paraxial_rejected += std::abs(beta * w);
                break;
            }
            dir = normalized(alpha_o * f.g + beta_t * f.t + gamma_o * f.n);
            origin = p + kRayEps * dir;
            beta *= w;
            prev_specular = true;
        }

        // Russian roulette below depth 3; survival follows |throughput| so
        // negative-weight paths see no sign bias
        if (depth >= 3) {
            const double q = std::clamp(std::abs(beta), 0.05, 1.0);
            if (rng.next_double() >= q) break;
            beta /= q;
        }
        if (beta == 0.0) break;
    }
    return radiance;
}

struct CameraBasis {
    Vec3 right, up, forward;
    double film_z;
};

CameraBasis camera_basis(const Camera& c) {
    CameraBasis b;
    b.forward = normalized(c.look_at - c.position);
    b.right = normalized(cross(b.forward, c.up));
    b.up = cross(b.right, b.forward);
    // virtual film in front of the lens at the thin-lens film distance
    b.film_z = 1.0 / (1.0 / c.focal_length - 1.0 / c.focus_distance);
    return b;
}

}  // namespace

void trace_pixel(const Scene& scene, const RenderSettings& settings, std::size_t px,
                 std::size_t py, int group, SpectralImage& img, double* var_sums,
                 double* raw_sums, double* paraxial_rejected) {
    if (settings.spp < 1) throw ArgumentError("trace_pixel: spp must be >= 1");
    const Camera& cam = scene.camera;
    const CameraBasis basis = camera_basis(cam);
    const std::size_t bins = scene.lambdas.size();

    // stratify pixel footprint and aperture jointly on a sqrt(spp) grid
    const int grid = std::max(1, static_cast<int>(std::floor(std::sqrt(double(settings.spp)))));

    for (std::size_t bin = 0; bin < bins; ++bin) {
        PathContext ctx{scene, settings, bin, group, paraxial_rejected};
        for (int s = 0; s < settings.spp; ++s) {
            RngStream rng = RngStream::from(
                settings.seed, (static_cast<std::uint64_t>(px) << 24) ^ py,
                (static_cast<std::uint64_t>(bin) << 16) ^ static_cast<std::uint64_t>(group + 7),
                static_cast<std::uint64_t>(s));
            const double jx = ((s % grid) + rng.next_double()) / grid;
            const double jy = ((s / grid % grid) + rng.next_double()) / grid;
            const double fx =
                (static_cast<double>(px) + jx - 0.5 * static_cast<double>(cam.film_width)) *
                cam.pixel_pitch;
            const double fy =
                (static_cast<double>(py) + jy - 0.5 * static_cast<double>(cam.film_height)) *
                cam.pixel_pitch;
            const Vec3 film_pt = cam.position + basis.film_z * basis.forward + fx * basis.right -
                                 fy * basis.up;
            const Vec3 d0 = normalized(film_pt - cam.position);
            const double t_focus = cam.focus_distance / dot(d0, basis.forward);
            const Vec3 p_focus = cam.position + t_focus * d0;
            // uniform disk sample on the aperture
            const double lr = cam.aperture_radius * std::sqrt(rng.next_double());
            const double la = 2.0 * kPi * rng.next_double();
            const Vec3 lens_pt = cam.position + lr * std::cos(la) * basis.right +
                                 lr * std::sin(la) * basis.up;
            const Vec3 dir = normalized(p_focus - lens_pt);

            const double value = trace_path(ctx, lens_pt, dir, rng);
            img.add(px, py, bin, value);
            if (var_sums) var_sums[(py * img.width() + px) * bins + bin] += value * value;
            if (raw_sums) raw_sums[(py * img.width() + px) * bins + bin] += value;
        }
    }
    img.add_count(px, py, static_cast<std::uint64_t>(settings.spp));
}

RenderResult render_scene(const Scene& scene, const RenderSettings& settings) {
    scene.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t w = scene.camera.film_width, h = scene.camera.film_height;
    const std::size_t bins = scene.lambdas.size();
    std::vector<int> groups = scene.coherence_groups();
    if (groups.empty()) groups.push_back(0);  // lightless scene renders to zero

    RenderResult out;
    std::vector<double> var_sums(w * h * bins, 0.0);
    std::vector<double> raw_sums(w * h * bins, 0.0);
    std::vector<double> rejected(h, 0.0);
    std::vector<SpectralImage::Finalized> finals;

    for (int group : groups) {
        SpectralImage img(w, h, bins);
        const int n_threads = std::max(1, settings.threads);
        std::vector<std::thread> pool;
        std::vector<double> row_rejected(h, 0.0);
        auto worker = [&](int tid) {
            for (std::size_t py = static_cast<std::size_t>(tid); py < h;
                 py += static_cast<std::size_t>(n_threads)) {
                double rej = 0.0;
                for (std::size_t px = 0; px < w; ++px)
                    trace_pixel(scene, settings, px, py, group, img, var_sums.data(),
                                raw_sums.data(), &rej);
                row_rejected[py] = rej;
            }
        };
        if (n_threads == 1) {
            worker(0);
        } else {
            for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
            for (auto& th : pool) th.join();
        }
        for (std::size_t py = 0; py < h; ++py) rejected[py] += row_rejected[py];
        finals.push_back(img.finalize());
    }

    out.per_group = finals;
    out.image = incoherent_sum(finals);
    out.stats.min_before_clamp = out.image.min_before_clamp;
    out.stats.max_value = out.image.max_value;
    for (double r : rejected) out.stats.paraxial_rejected += r;

    // mean per-pixel-bin variance of the estimator (pooled over groups):
    // var(mean) = (E[x^2] - E[x]^2) / n
    const double n = static_cast<double>(settings.spp) * static_cast<double>(groups.size());
    if (n > 1.5) {
        double total_var = 0.0;
        for (std::size_t i = 0; i < var_sums.size(); ++i) {
            const double m = raw_sums[i] / n;
            const double ex2 = var_sums[i] / n;
            total_var += std::max(0.0, ex2 - m * m) / n;
        }
        out.stats.mean_pixel_variance = total_var / static_cast<double>(var_sums.size());
    }

    out.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace wbsdf::render
