#include "nlos/optics/grid.hpp"

#include "nlos/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nlos::optics {

void GridSpec::validate() const {
    if (nx < 2 || ny < 2)
        throw ConfigError("grid must be at least 2x2, got " + std::to_string(nx) + "x" + std::to_string(ny));
    if (!(pitch > 0.0) || !std::isfinite(pitch)) throw ConfigError("grid pitch must be positive");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw ConfigError("wavelength must be positive");
}

double GridSpec::wavenumber() const noexcept { return 2.0 * std::numbers::pi / wavelength; }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) {
        throw ShapeError(std::string(what) + ": grid mismatch (" + std::to_string(a.nx) + "x" +
                         std::to_string(a.ny) + " vs " + std::to_string(b.nx) + "x" + std::to_string(b.ny) + ")");
    }
}

double ComplexField::total_energy() const {
    double sum = 0.0;
    for (const auto& a : values) sum += std::norm(a);
    return sum * grid.pitch * grid.pitch;
}

void AmplitudeMask::validate() const {
    if (values.size() != grid.size()) throw ShapeError("mask array does not match its grid");
    for (double t : values)
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("mask transmittance outside [0, 1]");
}

PhaseScreen PhaseScreen::with_offset(int dx, int dy) const {
    PhaseScreen out = *this;
    out.offset_x = dx;
    out.offset_y = dy;
    return out;
}

}  // namespace nlos::optics
