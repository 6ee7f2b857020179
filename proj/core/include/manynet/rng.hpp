#pragma once

#include <cmath>
#include <cstdint>

namespace manynet {

/// Seeded random stream (xoshiro256** seeded via splitmix64).
///
/// Hand-rolled so that runs, serialized suites, and report files are
/// reproducible independent of the standard library's distribution
/// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t nextUint64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(nextUint64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniformReal(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniformInt(std::uint64_t n) {
        // Rejection sampling to avoid modulo bias.
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = nextUint64();
            if (r >= threshold) return r % n;
        }
    }

    int index(std::size_t n) { return static_cast<int>(uniformInt(static_cast<std::uint64_t>(n))); }

    bool chance(double p) { return uniform() < p; }

    /// Gaussian via Box-Muller (one value per call, no caching so streams fork cleanly).
    double gaussian(double mean, double sigma) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Derives an independent child stream. Deterministic in (current state, tag);
    /// does not advance this stream.
    Rng fork(std::uint64_t tag) const {
        std::uint64_t x = state_[0] ^ rotl(state_[3], 13) ^ (tag * 0x9e3779b97f4a7c15ULL);
        return Rng(splitmix64(x));
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

} // namespace manynet
