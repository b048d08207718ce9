#pragma once

#include <complex>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace cfmimo {

/// Midrise uniform quantizer applied independently to the real and imaginary
/// parts. The range is [-w sigma_re, +w sigma_re] with sigma_re = sigma / sqrt(2);
/// inputs outside the range clip to the extreme level. An infinite level count
/// bypasses quantization.
struct QuantizerSpec {
    double levels = std::numeric_limits<double>::infinity();
    double clip = 15.0;
    double sigma = 1.0;

    static QuantizerSpec from_bits(int alpha, double clip, double sigma);

    double sigma_re() const noexcept;
    double step() const noexcept;
    bool bypass() const noexcept { return !std::isfinite(levels); }
};

/// Q = 2^alpha.
double levels_from_bits(int alpha);

/// Per-complex-sample error-power factor w^2 / (3 Q^2); 0 for infinite Q.
double distortion_factor(double clip, double levels);

double quantize_component(double x, const QuantizerSpec& spec) noexcept;
std::complex<double> uniform_quantize(std::complex<double> x, const QuantizerSpec& spec) noexcept;

/// Error power of the quantized received signal at AP m given its row of beta.
double error_variance_y(double rho, const Eigen::VectorXd& q, const Eigen::VectorXd& beta_row, double w_y, double levels);
double error_variance_g(double gamma, double w_g, double levels);

/// Aggregate Case-1 distortion constant a + b + ab with a, b the y and g factors.
double c_tot(double w_y, double w_g, double levels);

enum class BackhaulCase { case1, case2 };

struct BackhaulAccount {
    BackhaulCase case_id = BackhaulCase::case2;
    std::int64_t bits_per_coherence = 0;
    double capacity_bps = 0.0;
};

/// Bits per AP per coherence interval: 2 alpha N (K + tau_f) or 2 alpha K tau_f.
std::int64_t backhaul_bits(BackhaulCase case_id, std::int64_t N, std::int64_t K, std::int64_t tau_f, std::int64_t alpha);

double required_capacity(std::int64_t bits, double T_c);

BackhaulAccount backhaul_account(BackhaulCase case_id, std::int64_t N, std::int64_t K, std::int64_t tau_f,
                                 std::int64_t alpha, double T_c);

struct MatchedAlpha {
    double exact = 0.0;   ///< alpha1 (N K + N tau_f) / (K tau_f)
    std::int64_t bits = 0; ///< floor(exact)
    bool integral = false;
};

/// Case-2 bit width that spends the same backhaul bits as Case 1 with alpha1.
MatchedAlpha matched_alpha(std::int64_t N, std::int64_t K, std::int64_t tau_f, std::int64_t alpha1);

}  // namespace cfmimo
