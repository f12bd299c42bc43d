#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace nlos::optics {

using complex = std::complex<double>;

/// Square-pixel sampling grid of an optical plane.
struct GridSpec {
    int nx = 512;
    int ny = 512;
    double pitch = 10e-6;           ///< meters per pixel
    double wavelength = 632.8e-9;   ///< meters

    /// Throws ConfigError unless nx, ny >= 2 and pitch, wavelength > 0.
    void validate() const;

    std::size_t size() const noexcept { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double width() const noexcept { return nx * pitch; }
    double height() const noexcept { return ny * pitch; }
    double wavenumber() const noexcept;

    /// Physical coordinate of a pixel center, origin at the grid center.
    double x(int ix) const noexcept { return (ix - 0.5 * (nx - 1)) * pitch; }
    double y(int iy) const noexcept { return (iy - 0.5 * (ny - 1)) * pitch; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws ShapeError when the two grids do not describe the same plane sampling.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

/// Row-major 2-D array, index = iy * nx + ix.
template <typename T>
struct Plane {
    GridSpec grid;
    std::vector<T> values;

    Plane() = default;
    explicit Plane(const GridSpec& g, T fill = T{}) : grid(g), values(g.size(), fill) {}

    T& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    const T& at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
};

/// Sampled complex scalar field.
struct ComplexField : Plane<complex> {
    using Plane::Plane;

    /// Sum of |a|^2 * pitch^2.
    double total_energy() const;
};

/// Real transmittance in [0, 1] (the hidden object).
struct AmplitudeMask : Plane<double> {
    using Plane::Plane;
    /// Throws DomainError if any entry is outside [0, 1].
    void validate() const;
};

/// Detected intensity, entries >= 0.
struct IntensityImage : Plane<double> {
    using Plane::Plane;
};

/// Per-pixel random phase map of a diffusive wall.
///
/// The screen is usually larger than the field it is applied to; `patch_offset`
/// selects which window of the wall is illuminated, with cyclic indexing.
struct PhaseScreen {
    GridSpec grid;
    std::vector<double> phases;  ///< radians in [0, 2*pi), row-major
    std::uint64_t seed = 0;
    int facet = 1;               ///< grid pixels per wall facet along each axis
    int offset_x = 0;
    int offset_y = 0;

    double phase(int ix, int iy) const {
        const int sx = ((ix + offset_x) % grid.nx + grid.nx) % grid.nx;
        const int sy = ((iy + offset_y) % grid.ny + grid.ny) % grid.ny;
        return phases[static_cast<std::size_t>(sy) * grid.nx + sx];
    }

    /// Same phases, different illuminated window.
    PhaseScreen with_offset(int dx, int dy) const;
};

}  // namespace nlos::optics
