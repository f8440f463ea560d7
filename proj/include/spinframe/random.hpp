#pragma once

// Deterministic random streams.
//
// std::mt19937_64 produces a bit-exact sequence on every conforming
// implementation, but the standard <random> distributions do not.  To honor
// the bit-for-bit determinism contract (same seed => same output, across
// platforms), the mappings from raw engine words to doubles live here:
// a 53-bit uniform, Box-Muller normals, and area-uniform sphere points.

#include "spin.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace spinframe {

/// SplitMix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Mix a base seed with up to two stream indices into a substream seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ (a + 0x9e3779b97f4a7c15ULL));
    h = splitmix64(h ^ (b + 0x517cc1b727220a95ULL));
    return h;
}

/// A seeded random stream with platform-independent double-valued draws.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller (second value cached).
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]: keeps the log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    /// Area-uniform point on the unit sphere (z uniform, azimuth uniform).
    UnitVector sphere_point() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return UnitVector(r * std::cos(phi), r * std::sin(phi), z);
    }

    /// Unit vector tangent to the sphere at `at`, isotropic in the tangent plane.
    Eigen::Vector3d tangent_direction(const UnitVector& at) {
        for (;;) {
            Eigen::Vector3d g(normal(), normal(), normal());
            g -= g.dot(at.vec()) * at.vec();
            const double n = g.norm();
            if (n > 1e-9) return g / n;
        }
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace spinframe
