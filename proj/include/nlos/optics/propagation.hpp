#pragma once

#include "nlos/optics/grid.hpp"

#include <optional>
#include <string>

namespace nlos::optics {

/// Band-limited angular-spectrum propagation over a fixed distance.
///
/// The transfer function exp(i 2 pi z/lambda sqrt(1 - (lambda fx)^2 - (lambda fy)^2))
/// is tabulated once per (grid, distance); evanescent bins are set to zero.
/// The grid is treated as periodic.
class AngularSpectrumPropagator {
public:
    AngularSpectrumPropagator(const GridSpec& grid, double distance);

    ComplexField operator()(const ComplexField& field) const;
    void apply_in_place(ComplexField& field) const;

    const GridSpec& grid() const noexcept { return grid_; }
    double distance() const noexcept { return distance_; }

private:
    GridSpec grid_;
    double distance_;
    std::vector<complex> transfer_;
};

/// One-shot convenience wrapper around AngularSpectrumPropagator.
ComplexField propagate(const ComplexField& field, double distance);

/// Fraction of the field's energy that lives in evanescent spectral bins.
double evanescent_fraction(const ComplexField& field);

/// Returns a warning when the transfer function is undersampled for this
/// distance, i.e. |z| > N * pitch^2 / lambda along either axis. Propagation
/// still runs; the periodic grid then aliases wide-angle content.
std::optional<std::string> sampling_warning(const GridSpec& grid, double distance);

}  // namespace nlos::optics
