#include "wbsdf/scene_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "wbsdf/microstructure.hpp"
#include "wbsdf/wigner.hpp"

namespace wbsdf::render {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
    throw ArgumentError(ptr + ": " + msg);
}

const json& need(const json& j, const char* key, const std::string& ptr) {
    if (!j.contains(key)) fail(ptr + "/" + key, "missing required field");
    return j.at(key);
}

double need_num(const json& j, const char* key, const std::string& ptr) {
    const json& v = need(j, key, ptr);
    if (!v.is_number()) fail(ptr + "/" + key, "expected a number");
    return v.get<double>();
}

double opt_num(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

Vec3 need_vec3(const json& j, const char* key, const std::string& ptr) {
    const json& v = need(j, key, ptr);
    if (!v.is_array() || v.size() != 3) fail(ptr + "/" + key, "expected [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::vector<double> need_spectrum(const json& j, const char* key, const std::string& ptr,
                                  std::size_t bins) {
    const json& v = need(j, key, ptr);
    if (!v.is_array()) fail(ptr + "/" + key, "expected an array");
    std::vector<double> out;
    if (v.size() == 1) {
        out.assign(bins, v[0].get<double>());
    } else if (v.size() == bins) {
        for (const auto& e : v) out.push_back(e.get<double>());
    } else {
        fail(ptr + "/" + key, "expected 1 or " + std::to_string(bins) + " entries");
    }
    return out;
}

Microstructure parse_microstructure(const json& j, const std::string& ptr, SurfaceMode mode,
                                    const std::vector<double>& lambdas) {
    const std::string kind = need(j, "kind", ptr).get<std::string>();
    Microstructure s{Flat{}, mode, std::nullopt};
    if (kind == "flat") {
        s.kind = Flat{};
    } else if (kind == "sinusoidal_grating") {
        double height;
        if (j.contains("height_m")) {
            height = j.at("height_m").get<double>();
        } else if (j.contains("phase")) {
            // dimensionless peak phase parameter at a reference wavelength
            const double lref = j.contains("phase_lambda_nm")
                                    ? j.at("phase_lambda_nm").get<double>() * 1e-9
                                    : lambdas[lambdas.size() / 2];
            height = grating_height_for_phase(j.at("phase").get<double>(), lref, mode, 0.0);
        } else {
            fail(ptr, "sinusoidal_grating needs height_m or phase");
        }
        s.kind = SinusoidalGrating{height, need_num(j, "pitch_m", ptr)};
    } else if (kind == "binary_grating") {
        s.kind = BinaryPhaseGrating{need_num(j, "depth_m", ptr), need_num(j, "pitch_m", ptr),
                                    opt_num(j, "duty", 0.5)};
    } else if (kind == "slit") {
        s.kind = Slit{need_num(j, "width_m", ptr)};
    } else if (kind == "double_slit") {
        s.kind = DoubleSlit{need_num(j, "width_m", ptr), need_num(j, "separation_m", ptr)};
    } else if (kind == "circular_aperture") {
        s.kind = CircularAperture{need_num(j, "radius_m", ptr)};
    } else if (kind == "heightfield_csv") {
        s.kind = read_heightfield_csv(need(j, "file", ptr).get<std::string>());
    } else {
        fail(ptr + "/kind", "unknown microstructure kind '" + kind + "'");
    }
    if (j.contains("refractive_index")) s.refractive_index = j.at("refractive_index").get<double>();
    return s;
}

std::shared_ptr<WbsdfSet> build_tables(const json& jm, const std::string& ptr,
                                       const std::vector<double>& lambdas) {
    if (jm.contains("table_file")) {
        return std::make_shared<WbsdfSet>(
            read_wbsdf_binary(jm.at("table_file").get<std::string>()));
    }
    const std::string mode_s = need(jm, "mode", ptr).get<std::string>();
    if (mode_s != "reflective" && mode_s != "transmissive")
        fail(ptr + "/mode", "expected 'reflective' or 'transmissive'");
    const SurfaceMode mode =
        mode_s == "reflective" ? SurfaceMode::reflective : SurfaceMode::transmissive;
    const json& jt = need(jm, "table", ptr);
    GridSpec grid;
    grid.n = static_cast<std::size_t>(need_num(jt, "n", ptr + "/table"));
    grid.dx = need_num(jt, "dx_m", ptr + "/table");
    grid.x0 = opt_num(jt, "x0_m", 0.0);
    Microstructure micro =
        parse_microstructure(need(jm, "microstructure", ptr), ptr + "/microstructure", mode,
                             lambdas);
    auto set = std::make_shared<WbsdfSet>();
    set->mode = mode;
    for (double lambda : lambdas) {
        ComplexGrid t = realize(micro, Wavelength{lambda}, 0.0, grid);
        set->lambdas.push_back(lambda);
        set->tables.push_back(Wbsdf::from_wdf(wdf_1d(t), mode));
    }
    return set;
}

}  // namespace

SceneFile parse_scene(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ArgumentError(std::string("/: invalid JSON: ") + e.what());
    }
    if (!j.contains("version") || j.at("version").get<int>() != 1)
        fail("/version", "expected schema version 1");

    SceneFile out;
    Scene& scene = out.scene;

    const json& jl = need(j, "lambdas_nm", "/");
    if (!jl.is_array() || jl.empty()) fail("/lambdas_nm", "expected a non-empty array");
    for (const auto& e : jl) scene.lambdas.push_back(e.get<double>() * 1e-9);
    const std::size_t bins = scene.lambdas.size();

    // camera
    {
        const json& jc = need(j, "camera", "/");
        scene.camera.position = need_vec3(jc, "position", "/camera");
        scene.camera.look_at = need_vec3(jc, "look_at", "/camera");
        if (jc.contains("up")) scene.camera.up = need_vec3(jc, "up", "/camera");
        scene.camera.focal_length = need_num(jc, "focal_length_m", "/camera");
        scene.camera.aperture_radius = need_num(jc, "aperture_radius_m", "/camera");
        scene.camera.focus_distance = need_num(jc, "focus_distance_m", "/camera");
        const json& jf = need(jc, "film", "/camera");
        scene.camera.film_width = static_cast<std::size_t>(need_num(jf, "width", "/camera/film"));
        scene.camera.film_height = static_cast<std::size_t>(need_num(jf, "height", "/camera/film"));
        scene.camera.pixel_pitch = need_num(jf, "pixel_pitch_m", "/camera/film");
    }

    // materials
    std::vector<std::string> mat_names;
    const json& jms = need(j, "materials", "/");
    for (std::size_t i = 0; i < jms.size(); ++i) {
        const std::string ptr = "/materials/" + std::to_string(i);
        const json& jm = jms[i];
        Material m;
        m.name = need(jm, "name", ptr).get<std::string>();
        const std::string kind = need(jm, "kind", ptr).get<std::string>();
        if (kind == "diffuse") {
            m.kind = MaterialKind::diffuse;
            m.albedo = need_spectrum(jm, "albedo", ptr, bins);
        } else if (kind == "mirror") {
            m.kind = MaterialKind::mirror;
        } else if (kind == "wbsdf") {
            m.kind = MaterialKind::wbsdf;
            m.tables = build_tables(jm, ptr, scene.lambdas);
            m.paraxial_limit = opt_num(jm, "paraxial_limit_deg", 60.0) * std::numbers::pi / 180.0;
        } else {
            fail(ptr + "/kind", "unknown material kind '" + kind + "'");
        }
        mat_names.push_back(m.name);
        scene.materials.push_back(std::move(m));
    }

    auto material_index = [&](const std::string& name, const std::string& ptr) {
        for (std::size_t i = 0; i < mat_names.size(); ++i)
            if (mat_names[i] == name) return static_cast<int>(i);
        fail(ptr, "unknown material '" + name + "'");
    };

    const json& jps = need(j, "patches", "/");
    for (std::size_t i = 0; i < jps.size(); ++i) {
        const std::string ptr = "/patches/" + std::to_string(i);
        const json& jp = jps[i];
        Patch p;
        p.name = jp.contains("name") ? jp.at("name").get<std::string>() : "patch" + std::to_string(i);
        p.origin = need_vec3(jp, "origin", ptr);
        p.e1 = need_vec3(jp, "e1", ptr);
        p.e2 = need_vec3(jp, "e2", ptr);
        p.material = material_index(need(jp, "material", ptr).get<std::string>(), ptr + "/material");
        scene.patches.push_back(std::move(p));
    }

    const json& jls = need(j, "lights", "/");
    for (std::size_t i = 0; i < jls.size(); ++i) {
        const std::string ptr = "/lights/" + std::to_string(i);
        const json& jlight = jls[i];
        const std::string type = need(jlight, "type", ptr).get<std::string>();
        const int group = static_cast<int>(opt_num(jlight, "coherence_group", 0.0));
        if (type == "point" || type == "spot") {
            PointLight l;
            l.position = need_vec3(jlight, "position", ptr);
            l.intensity = need_spectrum(jlight, "intensity", ptr, bins);
            l.coherence_group = group;
            if (type == "spot") {
                l.is_spot = true;
                l.spot_direction = need_vec3(jlight, "direction", ptr);
                l.spot_cos_half =
                    std::cos(need_num(jlight, "cone_deg", ptr) * std::numbers::pi / 180.0);
            }
            scene.point_lights.push_back(std::move(l));
        } else if (type == "area") {
            AreaLight l;
            l.origin = need_vec3(jlight, "origin", ptr);
            l.e1 = need_vec3(jlight, "e1", ptr);
            l.e2 = need_vec3(jlight, "e2", ptr);
            l.radiance = need_spectrum(jlight, "radiance", ptr, bins);
            l.coherence_group = group;
            scene.area_lights.push_back(std::move(l));
        } else {
            fail(ptr + "/type", "unknown light type '" + type + "'");
        }
    }

    if (j.contains("render")) {
        const json& jr = j.at("render");
        out.settings.spp = static_cast<int>(opt_num(jr, "spp", 64));
        out.settings.seed = static_cast<std::uint64_t>(opt_num(jr, "seed", 1));
        out.settings.max_depth = static_cast<int>(opt_num(jr, "max_depth", 8));
        out.settings.nee_strata = static_cast<int>(opt_num(jr, "nee_strata", 8));
        out.settings.threads = static_cast<int>(opt_num(jr, "threads", 0));
    }
    return out;
}

SceneFile load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_scene: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

}  // namespace wbsdf::render
