#pragma once

#include "nlos/optics/grid.hpp"

#include <array>
#include <cstdint>

namespace nlos::optics {

/// Uniform plane wave: every pixel equals `amplitude`.
ComplexField plane_wave(const GridSpec& grid, double amplitude = 1.0);

/// Spherical wave exp(i k r) / r from `source` (x, y, z in meters) sampled on
/// the plane z = plane_z. Throws GeometryError if the source lies in that plane.
ComplexField point_source_field(const GridSpec& grid, const std::array<double, 3>& source, double plane_z);

/// Pointwise amplitude * transmittance. Grids must match exactly.
ComplexField apply_mask(const ComplexField& field, const AmplitudeMask& mask);

/// Generates an i.i.d. uniform [0, 2 pi) wall phase map. With facet > 1 one
/// phase value covers a facet x facet block of grid pixels. Deterministic in
/// (grid, seed, facet).
PhaseScreen make_phase_screen(const GridSpec& grid, std::uint64_t seed, int facet = 1);

/// Pointwise product with exp(i phase) over the screen window selected by the
/// screen's offset. The screen must share the field's pitch and wavelength and
/// be at least as large as the field.
ComplexField apply_phase_screen(const ComplexField& field, const PhaseScreen& screen);

struct LensOptions {
    double magnification = 1.0;
    /// Circular pupil cutoff as a numerical aperture; 0 disables it.
    /// Spatial frequencies with sqrt(fx^2 + fy^2) > na / lambda are removed.
    double numerical_aperture = 0.0;
};

/// Perfect imaging relay onto a sensor of the same sampling: optional pupil
/// low-pass, then coordinate rescale by the magnification (negative values
/// invert the image) with amplitude scaled by 1/|m| so energy is preserved.
ComplexField ideal_lens_image(const ComplexField& field, const LensOptions& lens);

}  // namespace nlos::optics
