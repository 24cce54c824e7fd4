#pragma once

#include <cstdint>
#include <random>

namespace specdim {

/// Seeded generator with platform-independent real conversion (the standard
/// distributions are implementation defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // rejection keeps the draw unbiased
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = 0;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    std::uint64_t next() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

}  // namespace specdim
