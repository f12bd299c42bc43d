#include "nlos/optics/detection.hpp"

#include "nlos/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlos::optics {

IntensityImage capture_intensity(const ComplexField& field, DetectionMode mode) {
    IntensityImage out(field.grid);
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const auto& a = field.values[i];
        out.values[i] = mode == DetectionMode::modulus_squared ? std::norm(a) : a.real() * a.real();
    }
    return out;
}

double two_point_intensity(double i1, double i2, double delta_phi, bool coherent) {
    if (i1 < 0.0 || i2 < 0.0) throw DomainError("two_point_intensity: intensities must be >= 0");
    if (!coherent) return i1 + i2;
    return i1 + i2 + 2.0 * std::sqrt(i1 * i2) * std::cos(delta_phi);
}

double SpeckleStats::density(std::size_t i) const noexcept {
    if (samples == 0 || bin_width <= 0.0) return 0.0;
    return histogram[i] / (static_cast<double>(samples) * bin_width);
}

SpeckleStats speckle_statistics(const IntensityImage& image) {
    const auto& v = image.values;
    if (v.empty()) throw ShapeError("speckle_statistics: empty image");
    SpeckleStats s;
    s.samples = v.size();
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    double mean = sum / n;
    double residual = 0.0;
    for (double x : v) residual += x - mean;
    s.mean_intensity = mean + residual / n;
    double sq = 0.0;
    for (double x : v) sq += (x - s.mean_intensity) * (x - s.mean_intensity);
    s.std_intensity = std::sqrt(sq / n);
    s.bin_width = kHistogramRange / kHistogramBins;
    s.histogram.assign(kHistogramBins, 0.0);
    if (s.mean_intensity > 0.0) {
        s.contrast = s.std_intensity / s.mean_intensity;
        for (double x : v) {
            const auto bin = static_cast<std::size_t>(x / s.mean_intensity / s.bin_width);
            s.histogram[std::min<std::size_t>(bin, kHistogramBins - 1)] += 1.0;
        }
    } else {
        s.contrast = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
}

double ks_statistic_exponential(const IntensityImage& image) {
    std::vector<double> x = image.values;
    if (x.empty()) throw ShapeError("ks_statistic_exponential: empty image");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    if (!(mean > 0.0)) throw DegenerateInputError("ks_statistic_exponential: zero mean intensity");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double cdf = 1.0 - std::exp(-x[i] / mean);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
    }
    return d;
}

double pearson_correlation(const IntensityImage& a, const IntensityImage& b) {
    if (a.values.size() != b.values.size() || a.values.empty())
        throw ShapeError("pearson_correlation: images differ in size");
    const double n = static_cast<double>(a.values.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        ma += a.values[i];
        mb += b.values[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double da = a.values[i] - ma, db = b.values[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw DegenerateInputError("pearson_correlation: constant image");
    return sab / std::sqrt(saa * sbb);
}

}  // namespace nlos::optics
