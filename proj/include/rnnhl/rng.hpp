#pragma once

#include <cstdint>

namespace rnnhl {

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64 so that any
// 64-bit seed, including 0, yields a well-mixed state. Generated specs and
// start points must reproduce across platforms, so we avoid the
// implementation-defined std::uniform_*_distribution and map raw 64-bit
// outputs to doubles ourselves.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0,1): top 53 bits scaled by 2^-53
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // uniform over [lo,hi] excluding the band (-dead, dead)
    double uniform_nonzero(double lo, double hi, double dead) {
        for (;;) {
            const double v = uniform(lo, hi);
            if (v <= -dead || v >= dead) return v;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        return next_u64() % n;  // bias negligible for the small n used here
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

}  // namespace rnnhl
