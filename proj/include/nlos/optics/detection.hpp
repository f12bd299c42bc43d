#pragma once

#include "nlos/optics/grid.hpp"

#include <vector>

namespace nlos::optics {

enum class DetectionMode {
    modulus_squared,  ///< I = |a|^2, standard square-law detector
    real_part_squared ///< I = (Re a)^2, literal Re-then-square variant, for comparison only
};

IntensityImage capture_intensity(const ComplexField& field, DetectionMode mode = DetectionMode::modulus_squared);

/// Two-point-source intensity. Incoherent sources add intensities; coherent
/// sources add the interference term 2 sqrt(i1 i2) cos(delta_phi).
/// Throws DomainError for negative intensities.
double two_point_intensity(double i1, double i2, double delta_phi, bool coherent);

struct SpeckleStats {
    double mean_intensity = 0.0;
    double std_intensity = 0.0;
    double contrast = 0.0;           ///< std / mean; NaN when mean == 0
    double bin_width = 0.0;          ///< width of a histogram bin in units of I / mean
    std::vector<double> histogram;   ///< counts of I / mean, last bin collects the overflow
    std::size_t samples = 0;

    bool contrast_defined() const noexcept { return mean_intensity > 0.0; }
    double bin_center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * bin_width; }
    /// Histogram normalized as a probability density.
    double density(std::size_t i) const noexcept;
};

inline constexpr int kHistogramBins = 50;
inline constexpr double kHistogramRange = 10.0;

/// Mean, population standard deviation, contrast and a 50-bin histogram of
/// I/mean on [0, 10). An all-zero image yields a NaN contrast (not an exception)
/// so batch statistics can skip it. Throws ShapeError on an empty image.
SpeckleStats speckle_statistics(const IntensityImage& image);

/// Kolmogorov-Smirnov distance between the empirical distribution of I/mean
/// and the unit exponential law of fully developed speckle.
double ks_statistic_exponential(const IntensityImage& image);

/// Pearson correlation of two equally sized images.
double pearson_correlation(const IntensityImage& a, const IntensityImage& b);

}  // namespace nlos::optics
