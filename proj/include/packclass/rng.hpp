#ifndef PACKCLASS_RNG_HPP
#define PACKCLASS_RNG_HPP

#include <cstdint>

// Tiny deterministic generator (splitmix64). Scenario generation and the
// randomized test suites need identical streams on every platform, which
// <random> distributions do not guarantee.

namespace packclass {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); modulo bias is irrelevant at these magnitudes.
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(int percent) { return static_cast<int>(below(100)) < percent; }

private:
    std::uint64_t state_;
};

}  // namespace packclass

#endif  // PACKCLASS_RNG_HPP
