#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

#include "cfmimo/quantization.hpp"
#include "cfmimo/rng.hpp"

using namespace cfmimo;

namespace {

/// Nearest of the Q reconstruction levels, by exhaustive search.
double reference_quantize(double x, double levels, double clip, double sigma_re)
{
    const double half = clip * sigma_re;
    const double delta = 2.0 * half / levels;
    double best = 0.0;
    double dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(levels); ++i) {
        const double level = -half + (i + 0.5) * delta;
        if (std::abs(x - level) < dist) {
            dist = std::abs(x - level);
            best = level;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("midrise quantizer matches a scalar reference")
{
    const QuantizerSpec spec = QuantizerSpec::from_bits(3, 2.0, 1.5);
    CHECK(spec.levels == 8.0);
    CHECK(spec.step() == doctest::Approx(2.0 * 2.0 * 1.5 / std::sqrt(2.0) / 8.0));
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        const double x = rng.uniform(-4.0, 4.0);
        CHECK(quantize_component(x, spec) == doctest::Approx(reference_quantize(x, 8.0, 2.0, spec.sigma_re())));
    }
    const auto z = uniform_quantize({0.0, 0.0}, spec);
    CHECK(std::abs(z.real()) == doctest::Approx(spec.step() / 2.0));
    CHECK(std::abs(z.imag()) == doctest::Approx(spec.step() / 2.0));
    // Out-of-range inputs clip to the extreme levels.
    CHECK(quantize_component(1e9, spec) == doctest::Approx(spec.clip * spec.sigma_re() - spec.step() / 2.0));
    CHECK(quantize_component(-1e9, spec) == doctest::Approx(-spec.clip * spec.sigma_re() + spec.step() / 2.0));
}

TEST_CASE("fine quantization error bound and bypass")
{
    const QuantizerSpec fine = QuantizerSpec::from_bits(20, 15.0, 1.0);
    Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
        const std::complex<double> x = rng.complex_normal();
        const auto y = uniform_quantize(x, fine);
        CHECK(std::abs(y.real() - x.real()) <= fine.step() / 2.0 + 1e-15);
        CHECK(std::abs(y.imag() - x.imag()) <= fine.step() / 2.0 + 1e-15);
    }
    const QuantizerSpec pass{};
    CHECK(pass.bypass());
    CHECK(uniform_quantize({0.3, -2.0}, pass) == std::complex<double>(0.3, -2.0));
}

TEST_CASE("Gaussian error variance follows the step law")
{
    const double sigma = 2.0;
    const QuantizerSpec spec = QuantizerSpec::from_bits(5, 15.0, sigma);
    Rng rng(12);
    const int samples = 1000000;
    double err = 0.0;
    for (int i = 0; i < samples; ++i) {
        const std::complex<double> x = sigma * rng.complex_normal();
        err += std::norm(uniform_quantize(x, spec) - x);
    }
    err /= samples;
    const double per_component = err / 2.0;
    CHECK(per_component == doctest::Approx(spec.step() * spec.step() / 12.0).epsilon(0.10));
    CHECK(err == doctest::Approx(distortion_factor(15.0, 32.0) * sigma * sigma).epsilon(0.10));
}

TEST_CASE("error variance laws")
{
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(3);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
    CHECK(error_variance_y(5.0, zeros, ones, 15.0, 8.0) == doctest::Approx(225.0 / (3.0 * 64.0)));
    Eigen::VectorXd q(1);
    q << 1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    CHECK(error_variance_y(1.0, q, b, std::sqrt(3.0), 1.0) == doctest::Approx(2.0));
    // Doubling rho sum q beta + 1 doubles the error.
    CHECK(error_variance_y(3.0, q, b, 4.0, 16.0) == doctest::Approx(2.0 * error_variance_y(1.0, q, b, 4.0, 16.0)));
    CHECK(error_variance_g(0.0, 15.0, 4.0) == 0.0);
    CHECK(error_variance_g(1.0, std::sqrt(3.0), 1.0) == doctest::Approx(1.0));
    CHECK(error_variance_g(1.0, 15.0, 4.0) > error_variance_g(1.0, 15.0, 8.0));
    CHECK_THROWS_AS(error_variance_y(1.0, q, ones, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("C_tot")
{
    CHECK(c_tot(0.0, 0.0, 4.0) == 0.0);
    CHECK(c_tot(std::sqrt(3.0), std::sqrt(3.0), 1.0) == doctest::Approx(3.0));
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const double wy = rng.uniform(0.0, 20.0);
        const double wg = rng.uniform(0.0, 20.0);
        const double Q = levels_from_bits(1 + static_cast<int>(rng.below(10)));
        const double a = distortion_factor(wy, Q);
        const double b = distortion_factor(wg, Q);
        CHECK(c_tot(wy, wg, Q) == doctest::Approx((1.0 + a) * (1.0 + b) - 1.0).epsilon(1e-12));
    }
    double previous = c_tot(15.0, 15.0, 2.0);
    for (int alpha = 2; alpha <= 30; ++alpha) {
        const double next = c_tot(15.0, 15.0, levels_from_bits(alpha));
        CHECK(next < previous);
        previous = next;
    }
    CHECK(c_tot(15.0, 15.0, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK_THROWS_AS(distortion_factor(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(levels_from_bits(0), std::invalid_argument);
}

TEST_CASE("backhaul bit accounting")
{
    CHECK(backhaul_bits(BackhaulCase::case1, 4, 20, 180, 9) == 14400);
    CHECK(backhaul_bits(BackhaulCase::case2, 4, 20, 180, 2) == 14400);
    CHECK(backhaul_bits(BackhaulCase::case1, 20, 40, 160, 8) == 64000);
    CHECK(backhaul_bits(BackhaulCase::case2, 20, 40, 160, 5) == 64000);
    CHECK(required_capacity(14400, 1e-3) == doctest::Approx(14.4e6));
    CHECK_THROWS_AS(required_capacity(14400, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(backhaul_bits(BackhaulCase::case1, 0, 20, 180, 9), std::invalid_argument);

    const auto acct = backhaul_account(BackhaulCase::case2, 4, 20, 180, 2, 1e-3);
    CHECK(acct.bits_per_coherence == 14400);
    CHECK(acct.capacity_bps == doctest::Approx(14.4e6));

    const auto a = matched_alpha(4, 20, 180, 9);
    CHECK(a.integral);
    CHECK(a.bits == 2);
    const auto b = matched_alpha(20, 40, 160, 8);
    CHECK(b.integral);
    CHECK(b.bits == 5);
    const auto c = matched_alpha(2, 40, 180, 5);
    CHECK_FALSE(c.integral);
    CHECK(c.exact == doctest::Approx(5.0 * (80.0 + 360.0) / 7200.0));
    CHECK(c.bits == 0);
}
