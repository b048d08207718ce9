#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/scenario.hpp"

namespace cfmimo {

using PowerVector = Eigen::VectorXd;
/// M x K combining weights; column k is u_k.
using ReceiverWeights = Eigen::MatrixXd;

/// Long-term quantities entering the weighted-combining SINR. The Upsilon and R
/// matrices are diagonal and kept as M x K arrays:
///   Upsilon_kk' diag = beta_mk' * upsilon(m, k),  upsilon = a_m (2 beta - gamma) + gamma
///   R_k diag         = r(m, k),                   r = (a_m + 1) gamma
/// where a_m = w_z^2 / (3 Q_m^2).
struct RateIngredients {
    GammaMatrix gamma;
    BetaMatrix beta;
    Eigen::MatrixXd upsilon;
    Eigen::MatrixXd r;

    int aps() const noexcept { return static_cast<int>(gamma.rows()); }
    int users() const noexcept { return static_cast<int>(gamma.cols()); }

    /// Lambda_kk' with entries gamma_mk beta_mk' / beta_mk (0 where beta_mk = 0).
    Eigen::VectorXd lambda(int k, int kp) const;
};

/// Per-user decomposition of the SINR into its expected term powers, all in
/// absolute (not rho-normalized) units. `iui` has K entries; the own entry is 0.
struct SinrBreakdown {
    double ds2 = 0.0;
    double bu = 0.0;
    std::vector<double> iui;
    double tn = 0.0;
    double tqe = 0.0;

    double interference() const;
    double sinr() const { return ds2 / interference(); }
};

struct WeightedRates {
    Eigen::VectorXd sinr;
    Eigen::VectorXd rate;
    std::vector<SinrBreakdown> breakdown;
};

/// With u fixed, every SINR_k is gain_k q_k / (coupling.row(k) q + noise_k).
/// The coupling diagonal carries the beamforming-uncertainty self term.
struct PowerCoupling {
    Eigen::VectorXd gain;
    Eigen::MatrixXd coupling;
    Eigen::VectorXd noise;

    Eigen::VectorXd sinr(const PowerVector& q) const;
    int users() const noexcept { return static_cast<int>(gain.size()); }
};

/// Rejects beta_mk = 0 paired with gamma_mk > 0.
void check_statistics(const BetaMatrix& beta, const GammaMatrix& gamma);

Eigen::VectorXd sinr_case1(const PowerVector& q, const BetaMatrix& beta, const GammaMatrix& gamma,
                           const PilotBook& pilots, const Eigen::VectorXd& c_tot_per_ap, int N, double rho);

Eigen::VectorXd sinr_case2(const PowerVector& q, const BetaMatrix& beta, const GammaMatrix& gamma,
                           const PilotBook& pilots, double w_z, const Eigen::VectorXd& levels_per_ap, int N, double rho);

/// Closed-form term powers for Case 1 (uniform unit combining, quantized CSI and signal).
std::vector<SinrBreakdown> breakdown_case1(const PowerVector& q, const BetaMatrix& beta, const GammaMatrix& gamma,
                                           const PilotBook& pilots, const Eigen::VectorXd& c_tot_per_ap, int N,
                                           double rho);

RateIngredients rate_ingredients(const BetaMatrix& beta, const GammaMatrix& gamma, double w_z,
                                 const Eigen::VectorXd& levels_per_ap);

/// Case-1 statistics in the weighted-combining layout: upsilon = r = (C_tot,m + 1) gamma.
/// With uniform weights the quadratic-form SINR equals sinr_case1.
RateIngredients case1_ingredients(const BetaMatrix& beta, const GammaMatrix& gamma, const Eigen::VectorXd& c_tot_per_ap);

/// Uniform 1/sqrt(M) combining.
ReceiverWeights uniform_weights(int M, int K);

/// Normalizes every column of u to unit norm, flipping its sign so u_k^T Gamma_k >= 0.
ReceiverWeights normalize_weights(const ReceiverWeights& u, const GammaMatrix& gamma);

PowerCoupling power_coupling(const ReceiverWeights& u, const RateIngredients& ing, const PilotBook& pilots, int N,
                             double rho);

/// Quadratic-form SINR of weighted combining.
Eigen::VectorXd sinr_with_weights(const ReceiverWeights& u, const PowerVector& q, const RateIngredients& ing,
                                  const PilotBook& pilots, int N, double rho);

/// Rates log2(1 + SINR) and the per-term breakdown. Throws on non-unit-norm columns.
WeightedRates rate_with_weights(const ReceiverWeights& u, const PowerVector& q, const RateIngredients& ing,
                                const PilotBook& pilots, int N, double rho);

inline double rate_from_sinr(double sinr) { return std::log2(1.0 + sinr); }

}  // namespace cfmimo
