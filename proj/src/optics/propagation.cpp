#include "nlos/optics/propagation.hpp"

#include "nlos/error.hpp"
#include "nlos/optics/fft.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nlos::optics {

AngularSpectrumPropagator::AngularSpectrumPropagator(const GridSpec& grid, double distance)
    : grid_(grid), distance_(distance), transfer_(grid.size()) {
    grid.validate();
    if (!std::isfinite(distance)) throw ConfigError("propagation distance must be finite");
    const double lambda = grid.wavelength;
    const double phase_per_unit = 2.0 * std::numbers::pi * distance / lambda;
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double ly = lambda * dft_frequency(iy, grid.ny, grid.pitch);
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double lx = lambda * dft_frequency(ix, grid.nx, grid.pitch);
            const double radicand = 1.0 - lx * lx - ly * ly;
            auto& h = transfer_[static_cast<std::size_t>(iy) * grid.nx + ix];
            if (radicand < 0.0) {
                h = 0.0;
            } else {
                const double phase = phase_per_unit * std::sqrt(radicand);
                h = complex(std::cos(phase), std::sin(phase));
            }
        }
    }
}

void AngularSpectrumPropagator::apply_in_place(ComplexField& field) const {
    require_same_grid(field.grid, grid_, "propagate");
    if (field.values.size() != grid_.size()) throw ShapeError("propagate: field array does not match its grid");
    if (distance_ == 0.0) return;
    fft2_forward(field.values, grid_.nx, grid_.ny);
    for (std::size_t i = 0; i < transfer_.size(); ++i) field.values[i] *= transfer_[i];
    fft2_inverse(field.values, grid_.nx, grid_.ny);
}

ComplexField AngularSpectrumPropagator::operator()(const ComplexField& field) const {
    ComplexField out = field;
    apply_in_place(out);
    return out;
}

ComplexField propagate(const ComplexField& field, double distance) {
    return AngularSpectrumPropagator(field.grid, distance)(field);
}

double evanescent_fraction(const ComplexField& field) {
    const auto& g = field.grid;
    std::vector<complex> spectrum = field.values;
    fft2_forward(spectrum, g.nx, g.ny);
    double total = 0.0, evanescent = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double ly = g.wavelength * dft_frequency(iy, g.ny, g.pitch);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double lx = g.wavelength * dft_frequency(ix, g.nx, g.pitch);
            const double p = std::norm(spectrum[static_cast<std::size_t>(iy) * g.nx + ix]);
            total += p;
            if (1.0 - lx * lx - ly * ly < 0.0) evanescent += p;
        }
    }
    return total > 0.0 ? evanescent / total : 0.0;
}

std::optional<std::string> sampling_warning(const GridSpec& grid, double distance) {
    const int n = std::min(grid.nx, grid.ny);
    const double limit = n * grid.pitch * grid.pitch / grid.wavelength;
    if (std::abs(distance) <= limit) return std::nullopt;
    std::ostringstream msg;
    msg << "angular-spectrum transfer function undersampled: |z| = " << std::abs(distance)
        << " m exceeds N*pitch^2/lambda = " << limit << " m; wide-angle content wraps around the periodic grid";
    return msg.str();
}

}  // namespace nlos::optics
