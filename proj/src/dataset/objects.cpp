#include "nlos/dataset/objects.hpp"

#include "nlos/error.hpp"

#include <cmath>
#include <string>

namespace nlos::dataset {

LabeledImage binarize(const LabeledImage& img, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("binarize threshold must lie in (0, 1)");
    LabeledImage out = img;
    for (auto& p : out.pixels) p = p >= threshold ? 1.0 : 0.0;
    return out;
}

int object_pixels(const optics::GridSpec& grid, double object_size) {
    if (!(object_size > 0.0)) throw ConfigError("object size must be > 0");
    return static_cast<int>(std::lround(object_size / grid.pitch));
}

optics::AmplitudeMask embed_object(const LabeledImage& img, const optics::GridSpec& grid, double object_size) {
    grid.validate();
    const int n = object_pixels(grid, object_size);
    if (n > grid.nx || n > grid.ny)
        throw ConfigError("object of " + std::to_string(n) + " px does not fit a " + std::to_string(grid.nx) + "x" +
                          std::to_string(grid.ny) + " grid");
    if (n < 1) throw ConfigError("object smaller than one grid pixel");
    if (img.rows < 1 || img.cols < 1) throw ShapeError("embed_object: empty image");

    optics::AmplitudeMask mask(grid, 0.0);
    const int x0 = (grid.nx - n) / 2;
    const int y0 = (grid.ny - n) / 2;
    for (int j = 0; j < n; ++j) {
        const int src_r = static_cast<int>((static_cast<long>(j) * img.rows) / n);
        for (int i = 0; i < n; ++i) {
            const int src_c = static_cast<int>((static_cast<long>(i) * img.cols) / n);
            mask.at(x0 + i, y0 + j) = img.at(src_r, src_c);
        }
    }
    mask.validate();
    return mask;
}

}  // namespace nlos::dataset
