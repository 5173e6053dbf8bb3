#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace facecue {

// Stateless splitmix64 finalizer. All seeding in the project flows through
// this so that parallel and serial execution orders agree bit for bit.
inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Child-seed derivation: derive_seed(root, a) and derive_seed(root, a, b)
// give statistically independent streams for distinct (a, b).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(root) ^ a) ^ b);
}

// Deterministic generator with fully specified output on every platform.
// std::shuffle and the std distributions are implementation defined, so the
// transforms used here (rejection-sampled integers, 53-bit uniforms,
// Box-Muller normals, Fisher-Yates shuffles) are spelled out explicitly.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1].
    double next_unit_open_low() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (cosine branch only).
    double next_normal() {
        const double u1 = next_unit_open_low();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % bound;
    }

    std::size_t next_index(std::size_t bound) {
        return static_cast<std::size_t>(next_below(static_cast<std::uint64_t>(bound)));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = next_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace facecue
