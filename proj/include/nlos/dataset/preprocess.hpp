#pragma once

#include "nlos/optics/grid.hpp"

#include <cstdint>
#include <string_view>

namespace nlos::dataset {

enum class CropAnchor { center, offset };

std::string_view to_string(CropAnchor anchor);
CropAnchor parse_anchor(std::string_view name);

struct PreprocessConfig {
    int crop_size = 64;
    CropAnchor anchor = CropAnchor::center;
    int crop_x = 0;  ///< top-left corner when anchor == offset
    int crop_y = 0;
    double noise_sigma = 0.05;
    double binarize_threshold = 0.5;
    bool binarize = true;

    void validate() const;
};

/// size x size window, centred or with its top-left corner at (x, y).
/// Throws ShapeError if the window leaves the image.
optics::IntensityImage crop(const optics::IntensityImage& image, int size, CropAnchor anchor = CropAnchor::center,
                            int x = 0, int y = 0);

/// Additive Gaussian noise with standard deviation sigma * mean(image), clamped at 0.
optics::IntensityImage add_noise(const optics::IntensityImage& image, double sigma, std::uint64_t seed);

/// Affine map of [min, max] onto [0, 1]. Throws DegenerateInputError for a constant image.
optics::IntensityImage normalize(const optics::IntensityImage& image);

/// crop -> add_noise -> normalize, then rounded to float32 so persisted
/// records reload bit-exactly.
optics::IntensityImage preprocess(const optics::IntensityImage& capture, const PreprocessConfig& cfg,
                                  std::uint64_t noise_seed);

}  // namespace nlos::dataset
