#include "cfmimo/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfmimo {

double levels_from_bits(int alpha)
{
    if (alpha < 1)
        throw std::invalid_argument("levels_from_bits: alpha must be >= 1");
    return std::ldexp(1.0, alpha);
}

QuantizerSpec QuantizerSpec::from_bits(int alpha, double clip, double sigma)
{
    return {levels_from_bits(alpha), clip, sigma};
}

double QuantizerSpec::sigma_re() const noexcept { return sigma * 0.70710678118654752440; }

double QuantizerSpec::step() const noexcept { return bypass() ? 0.0 : 2.0 * clip * sigma_re() / levels; }

double distortion_factor(double clip, double levels)
{
    if (!(levels >= 1.0))
        throw std::invalid_argument("distortion_factor: levels must be >= 1");
    if (!std::isfinite(levels))
        return 0.0;
    return clip * clip / (3.0 * levels * levels);
}

double quantize_component(double x, const QuantizerSpec& spec) noexcept
{
    if (spec.bypass())
        return x;
    const double half_range = spec.clip * spec.sigma_re();
    const double delta = spec.step();
    if (!(delta > 0.0))
        return 0.0;
    const double top = spec.levels - 1.0;
    const double index = std::clamp(std::floor((x + half_range) / delta), 0.0, top);
    return -half_range + (index + 0.5) * delta;
}

std::complex<double> uniform_quantize(std::complex<double> x, const QuantizerSpec& spec) noexcept
{
    return {quantize_component(x.real(), spec), quantize_component(x.imag(), spec)};
}

double error_variance_y(double rho, const Eigen::VectorXd& q, const Eigen::VectorXd& beta_row, double w_y, double levels)
{
    if (q.size() != beta_row.size())
        throw std::invalid_argument("error_variance_y: q and beta row sizes differ");
    return distortion_factor(w_y, levels) * (rho * q.dot(beta_row) + 1.0);
}

double error_variance_g(double gamma, double w_g, double levels)
{
    return distortion_factor(w_g, levels) * gamma;
}

double c_tot(double w_y, double w_g, double levels)
{
    const double a = distortion_factor(w_y, levels);
    const double b = distortion_factor(w_g, levels);
    return a + b + a * b;
}

std::int64_t backhaul_bits(BackhaulCase case_id, std::int64_t N, std::int64_t K, std::int64_t tau_f, std::int64_t alpha)
{
    if (N < 1 || K < 1 || tau_f < 1 || alpha < 1)
        throw std::invalid_argument("backhaul_bits: arguments must be positive");
    if (case_id == BackhaulCase::case1)
        return 2 * alpha * (N * K + N * tau_f);
    return 2 * alpha * K * tau_f;
}

double required_capacity(std::int64_t bits, double T_c)
{
    if (!(T_c > 0.0))
        throw std::invalid_argument("required_capacity: T_c must be positive");
    return static_cast<double>(bits) / T_c;
}

BackhaulAccount backhaul_account(BackhaulCase case_id, std::int64_t N, std::int64_t K, std::int64_t tau_f,
                                 std::int64_t alpha, double T_c)
{
    BackhaulAccount account;
    account.case_id = case_id;
    account.bits_per_coherence = backhaul_bits(case_id, N, K, tau_f, alpha);
    account.capacity_bps = required_capacity(account.bits_per_coherence, T_c);
    return account;
}

MatchedAlpha matched_alpha(std::int64_t N, std::int64_t K, std::int64_t tau_f, std::int64_t alpha1)
{
    if (N < 1 || K < 1 || tau_f < 1 || alpha1 < 1)
        throw std::invalid_argument("matched_alpha: arguments must be positive");
    const std::int64_t numerator = alpha1 * (N * K + N * tau_f);
    const std::int64_t denominator = K * tau_f;
    MatchedAlpha out;
    out.exact = static_cast<double>(numerator) / static_cast<double>(denominator);
    out.bits = numerator / denominator;
    out.integral = numerator % denominator == 0;
    return out;
}

}  // namespace cfmimo
