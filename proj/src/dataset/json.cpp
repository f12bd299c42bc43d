#include "nlos/dataset/json.hpp"

#include "nlos/error.hpp"

namespace nlos::scenario {

namespace {
nlohmann::json patch_json(PatchOffset p) { return nlohmann::json::array({p.x, p.y}); }
PatchOffset patch_from(const nlohmann::json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }
}  // namespace

void to_json(nlohmann::json& j, const ScenarioConfig& c) {
    j = nlohmann::json{
        {"kind", std::string(to_string(c.kind))},
        {"nx", c.grid.nx},
        {"ny", c.grid.ny},
        {"pitch", c.grid.pitch},
        {"wavelength", c.grid.wavelength},
        {"d_object_wall", c.d_object_wall},
        {"d_wall_camera", c.d_wall_camera},
        {"d_wall_wall", c.d_wall_wall},
        {"d_source_wall", c.d_source_wall},
        {"source_x", c.source_x},
        {"source_y", c.source_y},
        {"object_size", c.object_size},
        {"wall_seed", c.wall_seed},
        {"wall2_seed", c.wall2_seed},
        {"rotation_seed", c.rotation_seed},
        {"wall_scale", c.wall_scale},
        {"wall_facet", c.wall_facet},
        {"illumination_patch", patch_json(c.illumination_patch)},
        {"observation_patch", patch_json(c.effective_observation_patch())},
        {"lens_magnification", c.lens_magnification},
        {"lens_na", c.lens_na},
        {"detection", c.detection == optics::DetectionMode::modulus_squared ? "modulus" : "real-part"},
    };
}

void from_json(const nlohmann::json& j, ScenarioConfig& c) {
    c.kind = parse_kind(j.at("kind").get<std::string>());
    c.grid.nx = j.at("nx").get<int>();
    c.grid.ny = j.at("ny").get<int>();
    c.grid.pitch = j.at("pitch").get<double>();
    c.grid.wavelength = j.at("wavelength").get<double>();
    c.d_object_wall = j.at("d_object_wall").get<double>();
    c.d_wall_camera = j.at("d_wall_camera").get<double>();
    c.d_wall_wall = j.at("d_wall_wall").get<double>();
    c.d_source_wall = j.at("d_source_wall").get<double>();
    c.source_x = j.at("source_x").get<double>();
    c.source_y = j.at("source_y").get<double>();
    c.object_size = j.at("object_size").get<double>();
    c.wall_seed = j.at("wall_seed").get<std::uint64_t>();
    c.wall2_seed = j.at("wall2_seed").get<std::uint64_t>();
    c.rotation_seed = j.at("rotation_seed").get<std::uint64_t>();
    c.wall_scale = j.at("wall_scale").get<int>();
    c.wall_facet = j.at("wall_facet").get<int>();
    c.illumination_patch = patch_from(j.at("illumination_patch"));
    c.observation_patch = patch_from(j.at("observation_patch"));
    c.lens_magnification = j.at("lens_magnification").get<double>();
    c.lens_na = j.at("lens_na").get<double>();
    const auto det = j.at("detection").get<std::string>();
    if (det == "modulus") c.detection = optics::DetectionMode::modulus_squared;
    else if (det == "real-part") c.detection = optics::DetectionMode::real_part_squared;
    else throw ConfigError("unknown detection mode '" + det + "'");
}

void to_json(nlohmann::json& j, const CaptureProvenance& p) {
    j = nlohmann::json{{"kind", std::string(to_string(p.kind))},
                       {"wall_seed", p.wall_seed},
                       {"capture_index", p.capture_index},
                       {"object_id", p.object_id},
                       {"label", p.label},
                       {"version", p.version}};
    if (p.wall2_seed) j["wall2_seed"] = *p.wall2_seed;
    if (p.rotation_seed) j["rotation_seed"] = *p.rotation_seed;
    auto patches = nlohmann::json::array();
    for (auto q : p.patches) patches.push_back(patch_json(q));
    j["patches"] = std::move(patches);
}

void from_json(const nlohmann::json& j, CaptureProvenance& p) {
    p.kind = parse_kind(j.at("kind").get<std::string>());
    p.wall_seed = j.at("wall_seed").get<std::uint64_t>();
    p.capture_index = j.at("capture_index").get<std::uint64_t>();
    p.object_id = j.at("object_id").get<std::int64_t>();
    p.label = j.at("label").get<int>();
    p.version = j.at("version").get<std::string>();
    p.wall2_seed.reset();
    p.rotation_seed.reset();
    if (j.contains("wall2_seed")) p.wall2_seed = j["wall2_seed"].get<std::uint64_t>();
    if (j.contains("rotation_seed")) p.rotation_seed = j["rotation_seed"].get<std::uint64_t>();
    p.patches.clear();
    for (const auto& q : j.at("patches")) p.patches.push_back(patch_from(q));
}

}  // namespace nlos::scenario

namespace nlos::dataset {

void to_json(nlohmann::json& j, const PreprocessConfig& c) {
    j = nlohmann::json{{"crop_size", c.crop_size},
                       {"anchor", std::string(to_string(c.anchor))},
                       {"crop_x", c.crop_x},
                       {"crop_y", c.crop_y},
                       {"noise_sigma", c.noise_sigma},
                       {"binarize_threshold", c.binarize_threshold},
                       {"binarize", c.binarize}};
}

void from_json(const nlohmann::json& j, PreprocessConfig& c) {
    c.crop_size = j.at("crop_size").get<int>();
    c.anchor = parse_anchor(j.at("anchor").get<std::string>());
    c.crop_x = j.at("crop_x").get<int>();
    c.crop_y = j.at("crop_y").get<int>();
    c.noise_sigma = j.at("noise_sigma").get<double>();
    c.binarize_threshold = j.at("binarize_threshold").get<double>();
    c.binarize = j.at("binarize").get<bool>();
}

}  // namespace nlos::dataset
