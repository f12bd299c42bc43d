#pragma once

#include "nlos/dataset/idx.hpp"
#include "nlos/optics/grid.hpp"

namespace nlos::dataset {

/// Pixels >= threshold become 1, the rest 0. threshold must lie in (0, 1).
LabeledImage binarize(const LabeledImage& img, double threshold = 0.5);

/// Number of object pixels along each axis for a physical object size.
int object_pixels(const optics::GridSpec& grid, double object_size);

/// Places the image, resampled nearest-neighbour to object_size x object_size,
/// at the centre of an opaque screen: pixel value = transmittance.
/// Throws ConfigError if the object does not fit on the grid.
optics::AmplitudeMask embed_object(const LabeledImage& img, const optics::GridSpec& grid, double object_size);

}  // namespace nlos::dataset
