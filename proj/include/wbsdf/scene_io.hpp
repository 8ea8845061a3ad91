#pragma once

#include <string>

#include "wbsdf/render.hpp"

namespace wbsdf::render {

// Scene description: one JSON document (schema version 1). Geometry in
// meters, angles in degrees where suffixed, spectral arrays ordered to match
// "lambdas_nm". Malformed documents raise ArgumentError with a JSON-pointer
// style path; semantic scene problems surface later via Scene::validate().
struct SceneFile {
    Scene scene;
    RenderSettings settings;
};

SceneFile load_scene(const std::string& path);
SceneFile parse_scene(const std::string& json_text);

}  // namespace wbsdf::render
