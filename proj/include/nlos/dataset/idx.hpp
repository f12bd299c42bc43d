#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace nlos::dataset {

/// Grayscale image with a digit label.
struct LabeledImage {
    int rows = 0;
    int cols = 0;
    std::vector<double> pixels;  ///< row-major, values in [0, 1]
    int label = 0;
    std::int64_t id = -1;        ///< position in the source file

    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * cols + c]; }
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr std::size_t kDefaultDigitLimit = 10000;

/// Reads an IDX image/label file pair (MNIST layout: big-endian header,
/// unsigned bytes). Pixels are scaled by 1/255. At most `limit` records are
/// returned. Throws ParseError (with the byte offset) on bad magic numbers,
/// truncation or mismatched counts, and IoError if a file cannot be opened.
std::vector<LabeledImage> load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                                   std::size_t limit = kDefaultDigitLimit);

/// Same, from in-memory buffers.
std::vector<LabeledImage> parse_idx(const std::vector<std::uint8_t>& image_bytes,
                                    const std::vector<std::uint8_t>& label_bytes,
                                    std::size_t limit = kDefaultDigitLimit);

}  // namespace nlos::dataset
