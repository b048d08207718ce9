#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cfmimo {

/// Purpose tags for independent random streams. A stream is identified by
/// (master seed, trial, purpose), so parallel trials never share draws.
enum class Stream : std::uint64_t {
    topology = 1,
    shadowing = 2,
    pilots = 3,
    channel = 4,
    pilot_noise = 5,
    symbols = 6,
    receiver_noise = 7,
    oracle = 8,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, Stream purpose) noexcept;

/// Seeded engine with the draws the simulator needs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return normal_(engine_); }
    /// Circularly-symmetric complex normal with unit variance, CN(0, 1).
    std::complex<double> complex_normal()
    {
        constexpr double kScale = 0.70710678118654752440;
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {kScale * re, kScale * im};
    }
    /// Unit-modulus QPSK symbol.
    std::complex<double> qpsk()
    {
        constexpr double kScale = 0.70710678118654752440;
        const auto bits = engine_();
        return {(bits & 1U) ? kScale : -kScale, (bits & 2U) ? kScale : -kScale};
    }
    std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace cfmimo
