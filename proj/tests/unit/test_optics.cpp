#include <doctest.h>

#include "nlos/error.hpp"
#include "nlos/optics/detection.hpp"
#include "nlos/optics/elements.hpp"
#include "nlos/optics/propagation.hpp"
#include "nlos/random.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace nlos;
using namespace nlos::optics;

namespace {

constexpr double pi = std::numbers::pi;

GridSpec small_grid(int n = 64) {
    GridSpec g;
    g.nx = g.ny = n;
    return g;
}

ComplexField random_field(const GridSpec& g, std::uint64_t seed) {
    NormalSource normal(seed);
    ComplexField f(g);
    for (auto& v : f.values) v = complex(normal(), normal());
    return f;
}

ComplexField gaussian_beam(const GridSpec& g, double w0) {
    ComplexField f(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double r2 = g.x(ix) * g.x(ix) + g.y(iy) * g.y(iy);
            f.at(ix, iy) = std::exp(-r2 / (w0 * w0));
        }
    return f;
}

// 1/e^2 radius from the second moment along x: <x^2> = w^2 / 4 for a Gaussian.
double fitted_waist(const ComplexField& f) {
    double num = 0, den = 0;
    for (int iy = 0; iy < f.grid.ny; ++iy)
        for (int ix = 0; ix < f.grid.nx; ++ix) {
            const double i = std::norm(f.at(ix, iy));
            num += i * f.grid.x(ix) * f.grid.x(ix);
            den += i;
        }
    return 2.0 * std::sqrt(num / den);
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

double max_abs(const ComplexField& a) {
    double m = 0;
    for (auto& v : a.values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_CASE("grid validation") {
    GridSpec g = small_grid(4);
    CHECK_NOTHROW(g.validate());
    g.nx = 1;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = small_grid(4);
    g.pitch = 0;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = small_grid(4);
    g.wavelength = -1;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    CHECK(small_grid(8).width() == doctest::Approx(8 * 10e-6));
}

TEST_CASE("plane wave") {
    const auto g = small_grid(4);
    const auto f = plane_wave(g, 1.0);
    for (auto& v : f.values) CHECK(v == complex(1.0, 0.0));
    CHECK(plane_wave(g, 2.0).total_energy() == doctest::Approx(4.0 * f.total_energy()).epsilon(1e-15));
    CHECK(f.total_energy() == doctest::Approx(16 * 1e-10).epsilon(1e-12));

    GridSpec empty = g;
    empty.nx = empty.ny = 0;
    CHECK_THROWS_AS(plane_wave(empty, 1.0), ConfigError);
    CHECK_THROWS_AS(plane_wave(g, 0.0), ConfigError);
}

TEST_CASE("point source field") {
    const auto g = small_grid(32);
    const double z = 0.1;
    const auto f = point_source_field(g, {0, 0, 0}, z);

    // pixels (ix, iy) and (iy, ix) and the mirrored ones are equidistant from an on-axis source
    CHECK(f.at(3, 10) == f.at(10, 3));
    CHECK(f.at(3, 10) == f.at(31 - 3, 31 - 10));

    // 1/r envelope on axis: sample at a grid point exactly on the axis with an odd grid
    GridSpec odd = g;
    odd.nx = odd.ny = 33;
    const auto near = point_source_field(odd, {0, 0, 0}, 0.05);
    const auto far = point_source_field(odd, {0, 0, 0}, 0.10);
    CHECK(std::abs(far.at(16, 16)) == doctest::Approx(0.5 * std::abs(near.at(16, 16))).epsilon(1e-12));

    // phase equals k r mod 2 pi, evaluated directly in long double
    const std::array<double, 3> src{1e-4, -2e-4, -0.07};
    const auto s = point_source_field(g, src, 0.13);
    for (auto [ix, iy] : {std::pair{0, 0}, std::pair{5, 17}, std::pair{31, 2}}) {
        const long double dx = g.x(ix) - src[0], dy = g.y(iy) - src[1], dz = 0.13L - src[2];
        const long double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        const long double k = 2.0L * std::numbers::pi_v<long double> / g.wavelength;
        const long double expected = std::fmod(k * r, 2.0L * std::numbers::pi_v<long double>);
        const double got = std::arg(s.at(ix, iy));
        const double diff = std::remainder(got - static_cast<double>(expected), 2 * pi);
        CHECK(std::abs(diff) < 1e-6);
        CHECK(std::abs(s.at(ix, iy)) == doctest::Approx(1.0 / static_cast<double>(r)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(point_source_field(g, {0, 0, 0.2}, 0.2), GeometryError);
}

TEST_CASE("propagation at zero distance is the identity") {
    const auto f = random_field(small_grid(64), 11);
    const auto out = propagate(f, 0.0);
    CHECK(max_abs_diff(out, f) <= 1e-12 * max_abs(f));
}

TEST_CASE("propagation conserves energy across distances") {
    const auto g = small_grid(128);
    const auto f = random_field(g, 5);
    REQUIRE(evanescent_fraction(f) == 0.0);
    for (double d : {1e-3, 5e-3, 0.02, 0.1, 0.2, 0.5, 1.0}) {
        const double e = propagate(f, d).total_energy();
        CHECK(std::abs(e - f.total_energy()) / f.total_energy() < 1e-10);
    }
}

TEST_CASE("propagation composes") {
    const auto f = random_field(small_grid(128), 7);
    for (auto [d1, d2] : {std::pair{0.05, 0.15}, std::pair{0.003, 0.4}, std::pair{0.2, -0.05}}) {
        const auto two_step = propagate(propagate(f, d1), d2);
        const auto one_step = propagate(f, d1 + d2);
        CHECK(max_abs_diff(two_step, one_step) <= 1e-9 * max_abs(one_step));
    }
}

TEST_CASE("propagation is linear") {
    const auto g = small_grid(64);
    const auto f = random_field(g, 1), h = random_field(g, 2);
    const complex alpha(0.7, -1.3), beta(-2.0, 0.25);
    ComplexField mix(g);
    for (std::size_t i = 0; i < mix.values.size(); ++i) mix.values[i] = alpha * f.values[i] + beta * h.values[i];
    const double d = 0.2;
    const auto pf = propagate(f, d), ph = propagate(h, d), pm = propagate(mix, d);
    double err = 0;
    for (std::size_t i = 0; i < pm.values.size(); ++i)
        err = std::max(err, std::abs(pm.values[i] - (alpha * pf.values[i] + beta * ph.values[i])));
    CHECK(err <= 1e-10 * max_abs(pm));
}

TEST_CASE("propagation matches a naive angular-spectrum oracle") {
    GridSpec g = small_grid(12);
    g.pitch = 1e-6;  // dense enough that some bins are evanescent
    g.nx = 12;
    g.ny = 10;
    const auto f = random_field(g, 21);
    const double z = 3e-5;
    const auto got = propagate(f, z);
    const auto want = oracle::angular_spectrum(f.values, g.nx, g.ny, g.pitch, g.wavelength, z);
    double err = 0;
    for (std::size_t i = 0; i < want.size(); ++i) err = std::max(err, std::abs(got.values[i] - want[i]));
    CHECK(err < 1e-12 * max_abs(f) * 10);
}

TEST_CASE("evanescent components are removed") {
    GridSpec g = small_grid(32);
    g.pitch = 0.2e-6;  // Nyquist frequency 2.5e6 /m, lambda * f > 1
    ComplexField checker(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) checker.at(ix, iy) = ((ix + iy) % 2) ? 1.0 : -1.0;
    CHECK(evanescent_fraction(checker) == doctest::Approx(1.0));
    CHECK(propagate(checker, 1e-6).total_energy() < 1e-20);
}

TEST_CASE("Gaussian beam waist follows the analytic law") {
    const auto g = small_grid(512);
    const double w0 = 100e-6;
    const auto beam = gaussian_beam(g, w0);
    CHECK(fitted_waist(beam) == doctest::Approx(w0).epsilon(1e-3));
    for (double z : {0.05, 0.1, 0.2}) {
        const double want = oracle::gaussian_waist(w0, z, g.wavelength);
        const double got = fitted_waist(propagate(beam, z));
        INFO("z = " << z << " fitted " << got << " analytic " << want);
        CHECK(std::abs(got - want) / want < 0.01);
    }
}

TEST_CASE("sampling warning") {
    const auto g = small_grid(512);  // N p^2 / lambda ~ 8.1 cm
    CHECK_FALSE(sampling_warning(g, 0.05).has_value());
    CHECK(sampling_warning(g, 0.2).has_value());
}

TEST_CASE("amplitude masks") {
    const auto g = small_grid(16);
    const auto f = random_field(g, 3);
    CHECK(max_abs_diff(apply_mask(f, AmplitudeMask(g, 1.0)), f) <= 1e-12 * max_abs(f));
    CHECK(apply_mask(f, AmplitudeMask(g, 0.0)).total_energy() == 0.0);

    AmplitudeMask checker(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) checker.at(ix, iy) = (ix + iy) % 2;
    const auto pw = plane_wave(g, 1.0);
    CHECK(apply_mask(pw, checker).total_energy() == 0.5 * pw.total_energy());

    GridSpec other = g;
    other.nx = 8;
    CHECK_THROWS_AS(apply_mask(f, AmplitudeMask(other, 1.0)), ShapeError);

    AmplitudeMask bad(g, 0.5);
    bad.values[3] = 1.5;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("phase screens") {
    const auto g = small_grid(64);
    const auto f = random_field(g, 4);

    PhaseScreen zero = make_phase_screen(g, 1);
    std::fill(zero.phases.begin(), zero.phases.end(), 0.0);
    CHECK(max_abs_diff(apply_phase_screen(f, zero), f) <= 1e-12 * max_abs(f));

    const auto screen = make_phase_screen(g, 99);
    for (double p : screen.phases) {
        CHECK(p >= 0.0);
        CHECK(p < 2 * pi);
    }
    const auto out = apply_phase_screen(f, screen);
    double err = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        err = std::max(err, std::abs(std::abs(out.values[i]) - std::abs(f.values[i])));
    CHECK(err <= 1e-12 * max_abs(f));

    // regenerating from (seed, grid) is bit-exact; so is applying it
    const auto again = make_phase_screen(g, 99);
    CHECK(again.phases == screen.phases);
    CHECK(apply_phase_screen(f, again.with_offset(5, 9)).values == apply_phase_screen(f, screen.with_offset(5, 9)).values);
    CHECK(make_phase_screen(g, 100).phases != screen.phases);

    // uniform on [0, 2 pi): mean near pi
    double mean = 0;
    for (double p : screen.phases) mean += p;
    mean /= static_cast<double>(screen.phases.size());
    CHECK(mean == doctest::Approx(pi).epsilon(0.03));
}

TEST_CASE("phase screen facets and offsets") {
    const auto g = small_grid(32);
    const auto s = make_phase_screen(g, 8, 4);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) CHECK(s.phase(ix, iy) == s.phase(ix / 4 * 4, iy / 4 * 4));
    CHECK(s.phase(0, 0) != s.phase(4, 0));

    const auto shifted = s.with_offset(3, -2);
    CHECK(shifted.phase(0, 0) == s.phase(3, g.ny - 2));
    CHECK(shifted.phase(g.nx - 1, 1) == s.phase(2, g.ny - 1));
    CHECK_THROWS_AS(make_phase_screen(g, 1, 0), ConfigError);

    // a screen larger than the field selects a window; a smaller one is rejected
    GridSpec wall = g;
    wall.nx = wall.ny = 128;
    const auto big = make_phase_screen(wall, 5).with_offset(64, 32);
    const auto f = plane_wave(g, 1.0);
    const auto out = apply_phase_screen(f, big);
    CHECK(std::arg(out.at(2, 3)) == doctest::Approx(std::remainder(big.phases[35 * 128 + 66], 2 * pi)));
    CHECK_THROWS_AS(apply_phase_screen(plane_wave(wall, 1.0), s), ShapeError);
}

TEST_CASE("ideal lens") {
    const auto g = small_grid(32);
    const auto f = random_field(g, 6);
    CHECK(max_abs_diff(ideal_lens_image(f, {1.0, 0.0}), f) == 0.0);

    const auto flipped = ideal_lens_image(f, {-1.0, 0.0});
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) CHECK(flipped.at(ix, iy) == f.at(g.nx - 1 - ix, g.ny - 1 - iy));

    // magnification 2 of a uniform field: amplitude halves, the centre region is covered
    const auto mag = ideal_lens_image(plane_wave(g, 1.0), {2.0, 0.0});
    CHECK(std::abs(mag.at(16, 16)) == doctest::Approx(0.5));

    CHECK_THROWS_AS(ideal_lens_image(f, {0.0, 0.0}), ConfigError);
}

TEST_CASE("lens aperture limits the spectral support") {
    GridSpec g = small_grid(24);
    g.ny = 20;
    const auto f = random_field(g, 8);
    const double na = 0.01;  // cutoff 15,800 /m; grid Nyquist 50,000 /m
    const auto out = ideal_lens_image(f, {1.0, na});
    const auto spec = oracle::dft2(out.values, g.nx, g.ny);
    const auto spec_in = oracle::dft2(f.values, g.nx, g.ny);
    const double cutoff = na / g.wavelength;
    double outside = 0, inside_err = 0, scale = 0;
    for (int ky = 0; ky < g.ny; ++ky)
        for (int kx = 0; kx < g.nx; ++kx) {
            const double fx = oracle::bin_frequency(kx, g.nx, g.pitch), fy = oracle::bin_frequency(ky, g.ny, g.pitch);
            const std::size_t i = static_cast<std::size_t>(ky) * g.nx + kx;
            scale = std::max(scale, std::abs(spec_in[i]));
            if (std::hypot(fx, fy) > cutoff)
                outside = std::max(outside, std::abs(spec[i]));
            else
                inside_err = std::max(inside_err, std::abs(spec[i] - spec_in[i]));
        }
    CHECK(outside < 1e-12 * scale);
    CHECK(inside_err < 1e-12 * scale);
}

TEST_CASE("intensity capture") {
    const auto g = small_grid(8);
    const auto img = capture_intensity(plane_wave(g, 2.0));
    for (double v : img.values) CHECK(v == 4.0);

    // two unit point contributions in antiphase cancel at the pixel
    ComplexField two(g);
    two.at(3, 3) = complex(1.0, 0.0) + std::polar(1.0, pi);
    CHECK(capture_intensity(two).at(3, 3) < 1e-30);

    const auto f = random_field(g, 9);
    ComplexField rotated = f;
    for (auto& v : rotated.values) v *= std::polar(1.0, 1.234);
    const auto a = capture_intensity(f), b = capture_intensity(rotated);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(b.values[i] == doctest::Approx(a.values[i]).epsilon(1e-12));

    const auto re = capture_intensity(f, DetectionMode::real_part_squared);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(re.values[i] == f.values[i].real() * f.values[i].real());
}

TEST_CASE("two-point intensity") {
    CHECK(two_point_intensity(1, 1, 0, true) == doctest::Approx(4.0));
    CHECK(two_point_intensity(1, 1, pi, true) == doctest::Approx(0.0));
    for (double dphi : {0.0, 1.0, pi, 5.5}) CHECK(two_point_intensity(3, 5, dphi, false) == 8.0);
    CHECK(two_point_intensity(4, 1, pi / 2, true) == doctest::Approx(5.0));
    CHECK_THROWS_AS(two_point_intensity(-1, 1, 0, true), DomainError);
    CHECK_THROWS_AS(two_point_intensity(1, -1, 0, false), DomainError);
}

TEST_CASE("speckle statistics of simple images") {
    const auto g = small_grid(16);
    const auto s = speckle_statistics(IntensityImage(g, 3.0));
    CHECK(s.contrast == 0.0);
    CHECK(s.mean_intensity == 3.0);
    CHECK(s.histogram[static_cast<std::size_t>(1.0 / s.bin_width)] == 256.0);
    for (double level : {128.0 / 255, 0.1, 1.0 / 3, 7e-9}) {
        const auto c = speckle_statistics(IntensityImage(g, level));
        CHECK(c.contrast == 0.0);
        CHECK(c.mean_intensity == level);
    }

    const auto z = speckle_statistics(IntensityImage(g, 0.0));
    CHECK_FALSE(z.contrast_defined());
    CHECK(std::isnan(z.contrast));

    IntensityImage two(g, 1.0);
    for (std::size_t i = 0; i < two.values.size(); i += 2) two.values[i] = 3.0;
    const auto t = speckle_statistics(two);
    CHECK(t.contrast == doctest::Approx(0.5));
    double total = 0;
    for (std::size_t i = 0; i < t.histogram.size(); ++i) total += t.density(i) * t.bin_width;
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("fully developed speckle") {
    GridSpec g = small_grid(256);
    double contrast_sum = 0;
    const int seeds = 20;
    for (int seed = 1; seed <= seeds; ++seed) {
        const auto screen = make_phase_screen(g, static_cast<std::uint64_t>(seed));
        const auto img = capture_intensity(propagate(apply_phase_screen(plane_wave(g, 1.0), screen), 0.2));
        contrast_sum += speckle_statistics(img).contrast;
        const double ks = ks_statistic_exponential(img);
        INFO("seed " << seed);
        CHECK(ks < 0.05);
    }
    const double mean_contrast = contrast_sum / seeds;
    CHECK(mean_contrast >= 0.85);
    CHECK(mean_contrast <= 1.15);
}

TEST_CASE("averaging over screens approaches the incoherent sum") {
    // Smooth object: Gaussian amplitude. The incoherent reference is
    // sum_x' |h(x - x')|^2 |a(x')|^2 with h the single-pixel propagation kernel,
    // evaluated by a direct circular convolution.
    const GridSpec g = small_grid(48);
    const double d = 0.05;
    const auto object = gaussian_beam(g, 120e-6);

    ComplexField delta(g);
    delta.at(0, 0) = 1.0;
    const auto h = propagate(delta, d);
    const int n = g.nx;
    std::vector<double> reference(g.size(), 0.0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double acc = 0;
            for (int sy = 0; sy < n; ++sy)
                for (int sx = 0; sx < n; ++sx)
                    acc += std::norm(h.at(((x - sx) % n + n) % n, ((y - sy) % n + n) % n)) * std::norm(object.at(sx, sy));
            reference[static_cast<std::size_t>(y) * n + x] = acc;
        }

    AngularSpectrumPropagator prop(g, d);
    std::vector<double> sum(g.size(), 0.0);
    auto deviation = [&](int count) {
        double dev = 0;
        for (std::size_t i = 0; i < sum.size(); ++i) dev += std::abs(sum[i] / count - reference[i]) / reference[i];
        return dev / static_cast<double>(sum.size());
    };
    double dev10 = 0;
    for (int s = 1; s <= 100; ++s) {
        const auto img = capture_intensity(prop(apply_phase_screen(object, make_phase_screen(g, 1000 + s))));
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += img.values[i];
        if (s == 10) dev10 = deviation(10);
    }
    const double dev100 = deviation(100);
    INFO("deviation at 10 seeds " << dev10 << ", at 100 seeds " << dev100);
    CHECK(dev100 < 0.15);
    CHECK(dev100 < dev10);
}

TEST_CASE("pearson correlation") {
    const auto g = small_grid(16);
    IntensityImage a(g), b(g);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        a.values[i] = static_cast<double>(i % 7);
        b.values[i] = 2.0 * a.values[i] + 1.0;
    }
    CHECK(pearson_correlation(a, b) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pearson_correlation(a, IntensityImage(g, 1.0)), DegenerateInputError);
}
