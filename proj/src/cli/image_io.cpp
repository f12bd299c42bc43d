#include "nlos/cli/image_io.hpp"

#include "nlos/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#ifdef NLOS_HAVE_PNG
#include <png.h>
#endif

namespace nlos::cli {

Gray8 to_gray8(const optics::IntensityImage& image) {
    Gray8 g;
    g.width = image.grid.nx;
    g.height = image.grid.ny;
    g.pixels.resize(image.values.size());
    for (std::size_t i = 0; i < image.values.size(); ++i) {
        const double v = std::isnan(image.values[i]) ? 0.0 : std::clamp(image.values[i], 0.0, 1.0);
        g.pixels[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return g;
}

std::vector<std::uint8_t> encode_pgm(const Gray8& img) {
    const std::string header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

optics::IntensityImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto number = [&](const char* what) {
        skip_space();
        const std::size_t start = pos;
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos]) && pos - start < 9) v = v * 10 + (bytes[pos++] - '0');
        if (pos == start) throw ParseError(std::string("PGM: expected ") + what, start);
        return v;
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
        throw ParseError("not a PGM image (expected P5 or P2)", 0);
    const bool binary = bytes[1] == '5';
    pos = 2;
    const long w = number("width"), h = number("height"), maxval = number("maxval");
    if (w < 2 || h < 2) throw ParseError("PGM: image must be at least 2x2", 2);
    if (maxval < 1 || maxval > 255) throw ParseError("PGM: only 8-bit images are supported", pos);

    optics::GridSpec g;
    g.nx = static_cast<int>(w);
    g.ny = static_cast<int>(h);
    optics::IntensityImage img(g);
    if (binary) {
        ++pos;  // single whitespace after maxval
        if (bytes.size() < pos + img.values.size()) throw ParseError("PGM: truncated pixel data", bytes.size());
        for (std::size_t i = 0; i < img.values.size(); ++i)
            img.values[i] = static_cast<double>(bytes[pos + i]) / static_cast<double>(maxval);
    } else {
        for (auto& v : img.values) v = static_cast<double>(number("pixel")) / static_cast<double>(maxval);
    }
    return img;
}

bool png_supported() {
#ifdef NLOS_HAVE_PNG
    return true;
#else
    return false;
#endif
}

std::vector<std::uint8_t> encode_png(const Gray8& img) {
#ifdef NLOS_HAVE_PNG
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), 0, nullptr))
        throw IoError(std::string("PNG encoding failed: ") + image.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels.data(), 0, nullptr))
        throw IoError(std::string("PNG encoding failed: ") + image.message);
    out.resize(size);
    return out;
#else
    (void)img;
    throw ConfigError("this build has no PNG support; write a .pgm file instead");
#endif
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_image(const std::filesystem::path& path, const optics::IntensityImage& image) {
    const auto gray = to_gray8(image);
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    write_bytes(path, ext == ".png" ? encode_png(gray) : encode_pgm(gray));
}

optics::IntensityImage read_pgm(const std::filesystem::path& path) { return decode_pgm(read_bytes(path)); }

}  // namespace nlos::cli
