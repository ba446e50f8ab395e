#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dbac {

// Deterministic RNG with explicitly-specified derived distributions.
// std::mt19937_64 output is pinned by the standard; the draws below avoid
// std::*_distribution (whose algorithms are implementation-defined) so that
// identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return state_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n); n must be > 0. Multiply-shift bounding; the
    // modulo bias at n << 2^64 is far below anything observable here.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller (no cached spare; two draws per call).
    double next_normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double next_normal(double mean, double stddev) {
        return mean + stddev * next_normal();
    }

    // Fisher-Yates, high-to-low, using next_index for the bound.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    // SplitMix64: tiny, well-mixed, fully specified.
    struct SplitMix {
        std::uint64_t x;
        explicit SplitMix(std::uint64_t seed) : x(seed) {}
        std::uint64_t operator()() {
            x += 0x9E3779B97f4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        }
    };
    SplitMix state_;
};

// Seed derivation for independent sub-streams (e.g. per-side attacker seeds).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (0x9E3779B97f4A7C15ULL * (stream + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace dbac
