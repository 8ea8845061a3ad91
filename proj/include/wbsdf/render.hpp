#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wbsdf/bsdf_table.hpp"
#include "wbsdf/image.hpp"

namespace wbsdf::render {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};
Vec3 operator+(Vec3 a, Vec3 b);
Vec3 operator-(Vec3 a, Vec3 b);
Vec3 operator*(double s, Vec3 v);
double dot(Vec3 a, Vec3 b);
Vec3 cross(Vec3 a, Vec3 b);
double norm(Vec3 v);
Vec3 normalized(Vec3 v);

enum class MaterialKind { diffuse, mirror, wbsdf };

struct Material {
    MaterialKind kind = MaterialKind::diffuse;
    std::vector<double> albedo;             // per spectral bin (diffuse)
    std::shared_ptr<WbsdfSet> tables;       // wbsdf
    double paraxial_limit = 1.0471975512;   // radians; wbsdf patches reject beyond
    std::string name;
};

// Planar rectangle: origin corner plus orthogonal edge vectors. For wbsdf
// materials e1 is the grating (diffractive) axis and e2 the extruded axis.
struct Patch {
    Vec3 origin, e1, e2;
    int material = -1;
    std::string name;
};

struct PointLight {
    Vec3 position;
    std::vector<double> intensity;  // W/sr per bin
    int coherence_group = 0;
    bool is_spot = false;
    Vec3 spot_direction{0, 0, -1};
    double spot_cos_half = -1.0;
};

struct AreaLight {
    Vec3 origin, e1, e2;            // rectangle, emits from the +normal side
    std::vector<double> radiance;   // W/(sr m^2) per bin
    int coherence_group = 0;
};

struct Camera {
    Vec3 position, look_at, up{0, 0, 1};
    double focal_length = 0.05;
    double aperture_radius = 0.0;   // > 0; pinholes are rejected
    double focus_distance = 1.0;
    std::size_t film_width = 128, film_height = 128;
    double pixel_pitch = 10e-6;
};

struct Scene {
    std::vector<Material> materials;
    std::vector<Patch> patches;
    std::vector<PointLight> point_lights;
    std::vector<AreaLight> area_lights;
    Camera camera;
    std::vector<double> lambdas;  // spectral bins, ascending

    void validate() const;  // throws ScopeError with an enumerated message
    std::vector<int> coherence_groups() const;
};

struct RenderSettings {
    int spp = 64;
    std::uint64_t seed = 1;
    int threads = 1;
    int max_depth = 8;
    int nee_strata = 8;                  // strata across a wbsdf patch per connection
    bool uniform_wbsdf_sampling = false; // comparison estimator at wbsdf vertices
};

struct RenderStats {
    double min_before_clamp = 0.0;
    double max_value = 0.0;
    double paraxial_rejected = 0.0;      // |throughput| dropped by the angle guard
    double mean_pixel_variance = 0.0;    // mean per-pixel-bin estimator variance
    double wall_seconds = 0.0;
};

struct RenderResult {
    SpectralImage::Finalized image;
    std::vector<SpectralImage::Finalized> per_group;
    RenderStats stats;
};

// Deterministic for fixed (seed, spp) regardless of thread count. Coherence
// groups are rendered as independent passes whose finalized images add.
RenderResult render_scene(const Scene& scene, const RenderSettings& settings);

// Single-pixel estimator for one coherence group; accumulates spp samples per
// spectral bin into img, plus per-sample squares/sums into the optional
// buffers (layout width*height*bins). Exposed for the test suites.
void trace_pixel(const Scene& scene, const RenderSettings& settings, std::size_t px,
                 std::size_t py, int group, SpectralImage& img, double* var_sums,
                 double* raw_sums, double* paraxial_rejected);

}  // namespace wbsdf::render
