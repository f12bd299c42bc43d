#include "nlos/dataset/preprocess.hpp"

#include "nlos/error.hpp"
#include "nlos/random.hpp"

#include <algorithm>
#include <string>

namespace nlos::dataset {

std::string_view to_string(CropAnchor anchor) { return anchor == CropAnchor::center ? "center" : "offset"; }

CropAnchor parse_anchor(std::string_view name) {
    if (name == "center") return CropAnchor::center;
    if (name == "offset") return CropAnchor::offset;
    throw ConfigError("unknown crop anchor '" + std::string(name) + "' (expected center or offset)");
}

void PreprocessConfig::validate() const {
    if (crop_size < 1) throw ConfigError("crop size must be >= 1");
    if (noise_sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
    if (!(binarize_threshold > 0.0 && binarize_threshold < 1.0))
        throw ConfigError("binarize threshold must lie in (0, 1)");
}

optics::IntensityImage crop(const optics::IntensityImage& image, int size, CropAnchor anchor, int x, int y) {
    const auto& g = image.grid;
    if (size < 1 || size > g.nx || size > g.ny)
        throw ShapeError("crop of " + std::to_string(size) + " px does not fit a " + std::to_string(g.nx) + "x" +
                         std::to_string(g.ny) + " image");
    if (anchor == CropAnchor::center) {
        x = (g.nx - size) / 2;
        y = (g.ny - size) / 2;
    }
    if (x < 0 || y < 0 || x + size > g.nx || y + size > g.ny)
        throw ShapeError("crop window at (" + std::to_string(x) + ", " + std::to_string(y) + ") leaves the image");

    optics::GridSpec cg = g;
    cg.nx = cg.ny = size;
    optics::IntensityImage out(cg);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) out.at(c, r) = image.at(x + c, y + r);
    return out;
}

optics::IntensityImage add_noise(const optics::IntensityImage& image, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw DomainError("noise sigma must be >= 0");
    if (sigma == 0.0) return image;
    double mean = 0.0;
    for (double v : image.values) mean += v;
    mean /= static_cast<double>(image.values.size());
    const double std_dev = sigma * mean;

    NormalSource normal(seed);
    optics::IntensityImage out = image;
    for (auto& v : out.values) v = std::max(0.0, v + std_dev * normal());
    return out;
}

optics::IntensityImage normalize(const optics::IntensityImage& image) {
    if (image.values.empty()) throw ShapeError("normalize: empty image");
    const auto [lo_it, hi_it] = std::minmax_element(image.values.begin(), image.values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw DegenerateInputError("normalize: constant image");
    optics::IntensityImage out = image;
    const double scale = 1.0 / (hi - lo);
    for (auto& v : out.values) v = std::clamp((v - lo) * scale, 0.0, 1.0);
    return out;
}

optics::IntensityImage preprocess(const optics::IntensityImage& capture, const PreprocessConfig& cfg,
                                  std::uint64_t noise_seed) {
    auto out = normalize(add_noise(crop(capture, cfg.crop_size, cfg.anchor, cfg.crop_x, cfg.crop_y), cfg.noise_sigma,
                                   noise_seed));
    for (auto& v : out.values) v = static_cast<double>(static_cast<float>(v));
    return out;
}

}  // namespace nlos::dataset
