#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "aes/vec2.hpp"

namespace aes {

// Counter-derived RNG streams. Every consumer gets its own SplitMix64 stream
// derived from (seed, domain, a, b). Parallel and serial execution therefore
// see identical draws, and a fixed seed reproduces a run bit-for-bit on any
// platform (no implementation-defined std:: distributions involved).

inline constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct SplitMix64 {
    uint64_t state = 0;

    uint64_t next() {
        state += kGoldenGamma;
        return mix64(state);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform angle in (-pi, pi].
    double uniform_angle() { return std::numbers::pi - 2.0 * std::numbers::pi * next_double(); }

    /// Standard normal draw (Box-Muller, one value per call).
    double normal() {
        double u1 = 1.0 - next_double();  // (0, 1], keeps the log finite
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Unit vector with uniformly random orientation.
    Vec2 unit_vector() {
        double phi = uniform_angle();
        return {std::cos(phi), std::sin(phi)};
    }
};

// Domain tags keep unrelated consumers on disjoint substreams.
enum : uint64_t {
    kDomainInit = 1,       // lattice construction
    kDomainStep = 2,       // per-agent per-step dynamics noise
    kDomainReplicate = 3,  // Monte-Carlo replicate seeds
    kDomainOptimizer = 4,  // TCACS sampling
};

constexpr uint64_t derive_seed(uint64_t seed, uint64_t domain, uint64_t index) {
    uint64_t s = mix64(seed ^ kGoldenGamma);
    s = mix64(s ^ (domain * 0xD1342543DE82EF95ull));
    return mix64(s ^ (index * 0xDABA0B6EB09322E3ull));
}

constexpr SplitMix64 derive_stream(uint64_t seed, uint64_t domain, uint64_t a, uint64_t b) {
    uint64_t s = derive_seed(seed, domain, a);
    return SplitMix64{mix64(s ^ (b * 0x2545F4914F6CDD1Dull))};
}

}  // namespace aes
