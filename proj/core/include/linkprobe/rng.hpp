#ifndef LINKPROBE_RNG_HPP
#define LINKPROBE_RNG_HPP

#include <cstdint>
#include <cmath>

#include "linkprobe/geometry.hpp"

namespace linkprobe {

// Deterministic 64-bit generator (SplitMix64).  Every randomized sweep in the
// library derives one independent substream per sample index from (seed,
// index), so results are reproducible bit-for-bit regardless of how samples
// are scheduled across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent substream for sample `index` under master `seed`.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix(seed ^ mix(index + 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller (no caching; two uniforms per call).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    // Uniform point of the closed disk of given radius about `center`.
    Vec2 disk_point(Vec2 center, double radius) {
        const double rho = radius * std::sqrt(uniform01());
        const double phi = uniform(0.0, kTwoPi);
        return {center.x + rho * std::cos(phi), center.y + rho * std::sin(phi)};
    }

    // Uniform direction on the unit sphere.
    Point3 unit_vec3() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, kTwoPi);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace linkprobe

#endif // LINKPROBE_RNG_HPP
