#ifndef CARFIR_RNG_HPP
#define CARFIR_RNG_HPP

#include <cstdint>
#include <random>

namespace carfir {

/// mt19937_64 with hand-rolled draws. The standard distributions are
/// implementation-defined, so seeded runs would not reproduce across
/// standard libraries; these do.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace carfir

#endif
