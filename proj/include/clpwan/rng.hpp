#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace clpwan {

// Seed mixer (splitmix64). Used to derive independent per-device and
// per-purpose seeds from one scenario seed.
inline uint64_t mix_seed(uint64_t x, uint64_t salt) {
    uint64_t z = x + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// mt19937_64 is fully specified by the standard; the transforms below are
// spelled out so sampled streams do not depend on the standard library's
// distribution implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }

    double uniform(double low, double high) { return low + (high - low) * uniform(); }

    // inclusive integer range
    uint64_t uniform_int(uint64_t low, uint64_t high) {
        const double span = static_cast<double>(high - low) + 1.0;
        uint64_t offset = static_cast<uint64_t>(uniform() * span);
        if (offset > high - low) offset = high - low;
        return low + offset;
    }

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  private:
    std::mt19937_64 eng_;
};

} // namespace clpwan
