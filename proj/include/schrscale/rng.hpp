#pragma once

#include <cmath>
#include <cstdint>

namespace schrscale {

// Counter-based generator with a tiny state.  Each sample path owns one,
// seeded by hashing (ensemble seed, path id), so a path's draws never depend
// on scheduling order or worker count.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in (0, 1]; never 0, so logs are safe.
    double next_unit() {
        return double((next() >> 11) + 1) * 0x1.0p-53;
    }
};

inline std::uint64_t path_stream_seed(std::uint64_t seed, std::uint64_t path) {
    SplitMix64 mixer(seed ^ (path * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL));
    mixer.next();
    return mixer.next();
}

// Standard normals via Box-Muller; the second value of each pair is cached.
struct NormalStream {
    SplitMix64 bits;
    double spare = 0.0;
    bool has_spare = false;

    explicit NormalStream(std::uint64_t seed = 0) : bits(seed) {}

    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u = bits.next_unit();
        const double v = bits.next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u));
        const double angle = 6.283185307179586476925286766559 * v;
        spare = radius * std::sin(angle);
        has_spare = true;
        return radius * std::cos(angle);
    }
};

} // namespace schrscale
