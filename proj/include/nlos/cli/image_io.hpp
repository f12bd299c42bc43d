#pragma once

#include "nlos/optics/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace nlos::cli {

/// 8-bit grayscale raster, row-major.
struct Gray8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

/// Linear map [0, 1] -> [0, 255] (values outside are clamped), rounded to nearest.
Gray8 to_gray8(const optics::IntensityImage& image);

/// Binary PGM (P5, maxval 255).
std::vector<std::uint8_t> encode_pgm(const Gray8& img);
/// Reads P5 or P2 PGM with maxval up to 255, scaled to [0, 1].
optics::IntensityImage decode_pgm(const std::vector<std::uint8_t>& bytes);

bool png_supported();
/// Throws ConfigError when built without libpng.
std::vector<std::uint8_t> encode_png(const Gray8& img);

/// Chooses PNG or PGM from the file extension (".png" or anything else).
void write_image(const std::filesystem::path& path, const optics::IntensityImage& image);
optics::IntensityImage read_pgm(const std::filesystem::path& path);

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

}  // namespace nlos::cli
