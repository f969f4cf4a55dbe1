#pragma once

// Reproducible randomness. Every consumer owns a RandomStream seeded through
// split_seed(base, index), so independent trials draw from disjoint streams
// and reruns with the same base seed are bit-identical within a build.
//
// Generator: mt19937_64. Uniforms take the top 53 bits. Normal deviates use
// the Marsaglia polar method (pairs cached), so the draw sequence is fixed
// by this header rather than by the standard library.

#include <cmath>
#include <cstdint>
#include <random>

namespace substream {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of logical substream `index` of base seed `seed`.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 1));
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace substream
