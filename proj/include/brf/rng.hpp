#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace brf {

// Splittable deterministic generator. Stream identity lives in a 64-bit
// key evolved with SplitMix64-style mixing; draws come from mt19937_64
// seeded by that key, so sequences are bit-identical across platforms
// (the engine is fully specified by the standard). Child streams from
// derive(stream_id) are fully determined by the (seed, stream_id, ...)
// chain and independent of draw order elsewhere.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed)
        : key_(mix(seed ^ kGolden)), engine_(key_) {}

    // Independent child stream; deriving never advances this generator.
    [[nodiscard]] SeededRng derive(std::uint64_t stream_id) const {
        return SeededRng(mix(key_ ^ mix(stream_id + kGolden)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1. Lemire multiply-shift, unbiased.
    std::uint64_t next_below(std::uint64_t n) {
        while (true) {
            std::uint64_t x = next_u64();
            unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= (0 - n) % n) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Standard normal via Box-Muller; implemented here rather than with
    // std::normal_distribution, whose algorithm is implementation-defined.
    double next_normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

  private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::mt19937_64 engine_;
};

}  // namespace brf
