#include "nlos/optics/elements.hpp"

#include "nlos/error.hpp"
#include "nlos/optics/fft.hpp"
#include "nlos/random.hpp"

#include <cmath>
#include <numbers>

namespace nlos::optics {

ComplexField plane_wave(const GridSpec& grid, double amplitude) {
    grid.validate();
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw ConfigError("plane wave amplitude must be positive");
    return ComplexField(grid, complex(amplitude, 0.0));
}

ComplexField point_source_field(const GridSpec& grid, const std::array<double, 3>& source, double plane_z) {
    grid.validate();
    const double dz = plane_z - source[2];
    if (dz == 0.0) throw GeometryError("point source lies in the sampling plane");
    const double k = grid.wavenumber();
    ComplexField out(grid);
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double dy = grid.y(iy) - source[1];
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double dx = grid.x(ix) - source[0];
            const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
            // reduce k*r before the trig call; r can be ~1e6 wavelengths
            const double phase = std::fmod(k * r, 2.0 * std::numbers::pi);
            out.at(ix, iy) = complex(std::cos(phase), std::sin(phase)) / r;
        }
    }
    return out;
}

ComplexField apply_mask(const ComplexField& field, const AmplitudeMask& mask) {
    require_same_grid(field.grid, mask.grid, "apply_mask");
    ComplexField out = field;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= mask.values[i];
    return out;
}

PhaseScreen make_phase_screen(const GridSpec& grid, std::uint64_t seed, int facet) {
    grid.validate();
    if (facet < 1) throw ConfigError("wall facet size must be >= 1 pixel");
    const int cells_x = (grid.nx + facet - 1) / facet;
    const int cells_y = (grid.ny + facet - 1) / facet;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    Engine eng(seed);
    std::vector<double> cells(static_cast<std::size_t>(cells_x) * cells_y);
    for (auto& c : cells) {
        c = uniform01(eng) * two_pi;
        if (c >= two_pi) c = std::nextafter(two_pi, 0.0);
    }

    PhaseScreen screen;
    screen.grid = grid;
    screen.seed = seed;
    screen.facet = facet;
    screen.phases.resize(grid.size());
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            screen.phases[static_cast<std::size_t>(iy) * grid.nx + ix] =
                cells[static_cast<std::size_t>(iy / facet) * cells_x + ix / facet];
    return screen;
}

ComplexField apply_phase_screen(const ComplexField& field, const PhaseScreen& screen) {
    const auto& f = field.grid;
    const auto& s = screen.grid;
    if (f.pitch != s.pitch || f.wavelength != s.wavelength)
        throw ShapeError("apply_phase_screen: screen pitch/wavelength differ from the field's");
    if (s.nx < f.nx || s.ny < f.ny) throw ShapeError("apply_phase_screen: screen smaller than the field");
    if (screen.phases.size() != s.size()) throw ShapeError("apply_phase_screen: phase array does not match its grid");

    ComplexField out = field;
    for (int iy = 0; iy < f.ny; ++iy) {
        for (int ix = 0; ix < f.nx; ++ix) {
            const double p = screen.phase(ix, iy);
            out.at(ix, iy) *= complex(std::cos(p), std::sin(p));
        }
    }
    return out;
}

ComplexField ideal_lens_image(const ComplexField& field, const LensOptions& lens) {
    const double m = lens.magnification;
    if (m == 0.0 || !std::isfinite(m)) throw ConfigError("lens magnification must be finite and nonzero");
    if (lens.numerical_aperture < 0.0) throw ConfigError("lens numerical aperture must be >= 0");
    const auto& g = field.grid;

    ComplexField pupil_filtered = field;
    if (lens.numerical_aperture > 0.0) {
        const double cutoff = lens.numerical_aperture / g.wavelength;
        auto& spec = pupil_filtered.values;
        fft2_forward(spec, g.nx, g.ny);
        for (int iy = 0; iy < g.ny; ++iy) {
            const double fy = dft_frequency(iy, g.ny, g.pitch);
            for (int ix = 0; ix < g.nx; ++ix) {
                const double fx = dft_frequency(ix, g.nx, g.pitch);
                if (fx * fx + fy * fy > cutoff * cutoff) spec[static_cast<std::size_t>(iy) * g.nx + ix] = 0.0;
            }
        }
        fft2_inverse(spec, g.nx, g.ny);
    }
    if (m == 1.0) return pupil_filtered;

    // Sensor pixel at x samples the object plane at x / m (nearest neighbour).
    ComplexField out(g);
    const double cx = 0.5 * (g.nx - 1);
    const double cy = 0.5 * (g.ny - 1);
    const double scale = 1.0 / std::abs(m);
    for (int iy = 0; iy < g.ny; ++iy) {
        const long sy = std::lround((iy - cy) / m + cy);
        if (sy < 0 || sy >= g.ny) continue;
        for (int ix = 0; ix < g.nx; ++ix) {
            const long sx = std::lround((ix - cx) / m + cx);
            if (sx < 0 || sx >= g.nx) continue;
            out.at(ix, iy) = pupil_filtered.at(static_cast<int>(sx), static_cast<int>(sy)) * scale;
        }
    }
    return out;
}

}  // namespace nlos::optics
