#pragma once

#include <cstdint>

namespace coarse {

/// splitmix64 step. Used both as a stateless hash (seeded generators need
/// O(1) random access to bit i) and to seed the streaming engine below.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic stream RNG. std::uniform_int_distribution is
/// implementation-defined, so tests and experiments that freeze expected
/// values draw through this wrapper only.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x5851f42d4c957f2dULL)) {}

    std::uint64_t next() {
        state_ = splitmix64(state_);
        return state_;
    }

    /// Uniform in [0, n) by rejection; n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    int bit() { return static_cast<int>(next() & 1u); }

    /// True with probability num/den.
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  private:
    std::uint64_t state_;
};

}  // namespace coarse
