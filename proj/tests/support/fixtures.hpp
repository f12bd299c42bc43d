#pragma once

#include "nlos/dataset/idx.hpp"
#include "nlos/dataset/objects.hpp"
#include "nlos/optics/grid.hpp"
#include "nlos/scenario/scenario.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace fixtures {

inline std::filesystem::path data_dir() { return NLOS_DATA_DIR; }

inline const std::vector<nlos::dataset::LabeledImage>& mnist(std::size_t limit = 200) {
    static const auto digits = nlos::dataset::load_idx(data_dir() / "mnist/images-idx3-ubyte",
                                                       data_dir() / "mnist/labels-idx1-ubyte", 2000);
    if (limit > digits.size()) throw std::runtime_error("fixture digit limit too large");
    return digits;
}

inline const nlos::dataset::LabeledImage& first_digit(int label) {
    for (const auto& d : mnist())
        if (d.label == label) return d;
    throw std::runtime_error("no digit " + std::to_string(label));
}

inline nlos::scenario::ScenarioConfig small_config(nlos::scenario::ScenarioKind kind, int n = 128) {
    nlos::scenario::ScenarioConfig cfg;
    cfg.kind = kind;
    cfg.grid.nx = cfg.grid.ny = n;
    cfg.object_size = n * cfg.grid.pitch / 2;
    cfg.wall_scale = 2;
    return cfg;
}

inline nlos::optics::AmplitudeMask digit_mask(const nlos::scenario::ScenarioConfig& cfg, int label) {
    return nlos::dataset::embed_object(nlos::dataset::binarize(first_digit(label)), cfg.grid, cfg.object_size);
}

}  // namespace fixtures
