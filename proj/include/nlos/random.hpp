#pragma once

// Seed derivation and portable variate generation.
//
// std::mt19937_64 is bit-specified by the standard, but the std::*_distribution
// adaptors are not, so every variate used in persisted data goes through the
// helpers below. This keeps datasets and checkpoints reproducible across
// standard libraries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace nlos {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed `index` of stream `parent`.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(mix64(parent) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound), unbiased (rejection sampling).
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % bound;
}

/// Standard normal variates by the Box-Muller transform; caches the second value.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform01(eng_);
        } while (u1 <= 0.0);
        const double u2 = uniform01(eng_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    Engine eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace nlos
