#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace synsis {

/// Reproducible random stream. The engine (mt19937_64) and every variate
/// conversion below are fully specified, so a seed yields the same
/// sequence on any platform. Distribution helpers are hand-rolled because
/// the standard library leaves <random> distributions implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential waiting time with the given rate (> 0).
    double exponential(double rate) {
        // 1 - uniform() is in (0, 1], so the log is finite.
        return -std::log(1.0 - uniform()) / rate;
    }

    /// Uniform integer in [0, n), n >= 1. Unbiased via rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace synsis
