#include "nlos/dataset/idx.hpp"

#include "nlos/error.hpp"

#include <fstream>
#include <iterator>
#include <string>

namespace nlos::dataset {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset, const char* what) {
    if (offset + 4 > bytes.size()) throw ParseError(std::string(what) + ": truncated header", bytes.size());
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string hex(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

}  // namespace

std::vector<LabeledImage> parse_idx(const std::vector<std::uint8_t>& image_bytes,
                                    const std::vector<std::uint8_t>& label_bytes, std::size_t limit) {
    const auto image_magic = read_be32(image_bytes, 0, "image file");
    if (image_magic != kIdxImageMagic)
        throw ParseError("image file: bad magic " + hex(image_magic) + ", expected " + hex(kIdxImageMagic), 0);
    const auto label_magic = read_be32(label_bytes, 0, "label file");
    if (label_magic != kIdxLabelMagic)
        throw ParseError("label file: bad magic " + hex(label_magic) + ", expected " + hex(kIdxLabelMagic), 0);

    const std::size_t n_images = read_be32(image_bytes, 4, "image file");
    const std::size_t rows = read_be32(image_bytes, 8, "image file");
    const std::size_t cols = read_be32(image_bytes, 12, "image file");
    const std::size_t n_labels = read_be32(label_bytes, 4, "label file");
    if (n_images != n_labels)
        throw ParseError("label count " + std::to_string(n_labels) + " does not match image count " +
                             std::to_string(n_images), 4);
    if (rows == 0 || cols == 0) throw ParseError("image file: zero image dimension", 8);

    constexpr std::size_t image_header = 16, label_header = 8;
    const std::size_t stride = rows * cols;
    const std::size_t image_need = image_header + n_images * stride;
    if (image_bytes.size() < image_need)
        throw ParseError("image file truncated: need " + std::to_string(image_need) + " bytes", image_bytes.size());
    if (label_bytes.size() < label_header + n_labels)
        throw ParseError("label file truncated: need " + std::to_string(label_header + n_labels) + " bytes",
                         label_bytes.size());

    const std::size_t count = std::min(limit, n_images);
    std::vector<LabeledImage> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto& img = out[i];
        img.rows = static_cast<int>(rows);
        img.cols = static_cast<int>(cols);
        img.id = static_cast<std::int64_t>(i);
        img.label = label_bytes[label_header + i];
        if (img.label > 9) throw ParseError("label " + std::to_string(img.label) + " outside 0..9", label_header + i);
        img.pixels.resize(stride);
        const auto* src = image_bytes.data() + image_header + i * stride;
        for (std::size_t k = 0; k < stride; ++k) img.pixels[k] = src[k] / 255.0;
    }
    return out;
}

std::vector<LabeledImage> load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                                   std::size_t limit) {
    return parse_idx(read_file(images), read_file(labels), limit);
}

}  // namespace nlos::dataset
