#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/estimation.hpp"
#include "cfmimo/quantization.hpp"
#include "cfmimo/rates.hpp"
#include "cfmimo/scenario.hpp"

namespace cfmimo {

/// Fixed large-scale setting that the sample-level simulation draws from.
struct OracleInstance {
    int N = 1;
    int tau = 1;
    double p_p = 1.0;
    double rho = 1.0;
    BetaMatrix beta;
    PilotBook pilots;
    EstimationStats stats;
    PowerVector q;
    /// Combining weights at the CPU. Case 1 combines with unit weights per AP.
    ReceiverWeights u;
    /// Quantization levels per AP; infinity bypasses the quantizers.
    Eigen::VectorXd levels;
    double w_y = 15.0;
    double w_g = 15.0;
    double w_z = 15.0;
};

/// Drops one topology from `config` and fills the instance at full power with
/// uniform combining and the bit width of the given case.
OracleInstance make_oracle_instance(const SystemConfig& config, BackhaulCase case_id, std::uint64_t seed);

/// Sample moments of one user's received-signal decomposition.
struct EmpiricalTerms {
    /// Same layout as the closed form; `ds2` is |sample mean|^2 and `bu` the sample variance.
    SinrBreakdown terms;
    /// Case 1 only: E|TQE_kk'|^2 for every k' followed by TQE^g, TQE^y, TQE^gy.
    std::vector<double> tqe_parts;
    /// E|r_k - DS_k s_k|^2, everything but the desired signal.
    double residual = 0.0;
    /// Names and |normalized cross-correlation| of every decomposition term pair.
    std::vector<std::string> term_names;
    Eigen::MatrixXd correlation;

    double max_cross_correlation() const;
    /// DS^2 over the measured residual power.
    double residual_sinr() const { return terms.ds2 / residual; }
};

struct OracleReport {
    BackhaulCase case_id = BackhaulCase::case2;
    int trials = 0;
    std::vector<EmpiricalTerms> users;
};

/// Simulates channels, pilot noise, MMSE estimates, QPSK data, received
/// signals and the actual uniform quantizers, then measures every term of the
/// CPU combiner output for each user. Quantizer ranges use the analytic
/// standard deviations. Trials are split into fixed chunks so the result is
/// independent of `workers`.
OracleReport oracle_case(BackhaulCase case_id, const OracleInstance& instance, int trials, std::uint64_t seed,
                         unsigned workers = 1);

OracleReport oracle_case(BackhaulCase case_id, const SystemConfig& config, int trials, std::uint64_t seed,
                         unsigned workers = 1);

/// Analytic per-sample standard deviation of z_mk used to range the Case-2 quantizer.
double analytic_sigma_z(const OracleInstance& instance, int m, int k);

}  // namespace cfmimo
