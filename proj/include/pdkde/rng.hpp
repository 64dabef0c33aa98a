#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pdkde {

// Seeded random stream: mt19937_64 engine with explicit, fully specified
// output transforms so that results are bit-reproducible for a given seed
// (std::uniform_real_distribution and friends are implementation-defined,
// so we do the conversions ourselves).
//
// uniform():   53-bit mantissa draw in [0, 1)
// normal():    Box-Muller pair, one value cached
// substream(): independent stream derived by splitmix64 mixing, used to
//              split Monte Carlo work into deterministic parallel chunks
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    RngStream substream(std::uint64_t index) const {
        return RngStream(mix64(seed_ ^ mix64(index + 0x9E3779B97F4A7C15ULL)));
    }

private:
    static std::uint64_t mix64(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    std::uint64_t seed_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives a child seed for indexed work items (dataset i of a sweep step,
// Monte Carlo block b, ...). Pure function of its inputs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    return mix(seed ^ mix(a ^ mix(b)));
}

}  // namespace pdkde
