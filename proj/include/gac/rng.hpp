#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace gac {

// splitmix64 finalizer; decorrelates seed streams derived from small integers
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// deterministic generator: mt19937_64 is fully specified by the standard,
// and the uniform mapping below avoids library-dependent distributions
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    // independent stream for a (seed, a, b) triple, e.g. (seed, size, trial)
    Rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
        : eng_(mix64(mix64(mix64(seed) ^ a) ^ b)) {}

    std::uint64_t bits() { return eng_(); }

    // uniform double in [0, 1), 53 random bits
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t reject = (0ull - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = eng_();
            if (r >= reject) return r % n;
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace gac
