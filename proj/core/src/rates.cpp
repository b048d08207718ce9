#include "cfmimo/rates.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cfmimo/quantization.hpp"

namespace cfmimo {
namespace {

void check_dims(const PowerVector& q, const BetaMatrix& beta, const GammaMatrix& gamma, const PilotBook& pilots)
{
    if (beta.rows() != gamma.rows() || beta.cols() != gamma.cols())
        throw std::invalid_argument("beta and gamma dimensions differ");
    if (q.size() != beta.cols() || pilots.gram2.rows() != beta.cols())
        throw std::invalid_argument("power vector or pilot book does not match K");
}

/// gamma / beta with 0/0 := 0.
Eigen::MatrixXd quality_ratio(const BetaMatrix& beta, const GammaMatrix& gamma)
{
    return (beta.array() > 0.0).select(gamma.array() / beta.array(), 0.0).matrix();
}

/// (k, k') entry sum_m w_mk gamma_mk beta_mk' / beta_mk, the weighted Lambda projection.
Eigen::MatrixXd lambda_projection(const Eigen::MatrixXd& weights, const BetaMatrix& beta, const GammaMatrix& gamma)
{
    return (weights.array() * quality_ratio(beta, gamma).array()).matrix().transpose() * beta;
}

Eigen::VectorXd levels_check(const Eigen::VectorXd& levels, Eigen::Index M)
{
    if (levels.size() != M)
        throw std::invalid_argument("per-AP level vector does not match M");
    return levels;
}

}  // namespace

void check_statistics(const BetaMatrix& beta, const GammaMatrix& gamma)
{
    for (Eigen::Index k = 0; k < beta.cols(); ++k)
        for (Eigen::Index m = 0; m < beta.rows(); ++m)
            if (!(beta(m, k) > 0.0) && gamma(m, k) > 0.0)
                throw std::invalid_argument("inconsistent statistics: beta is zero but gamma is positive at (m=" +
                                            std::to_string(m) + ", k=" + std::to_string(k) + ")");
}

Eigen::VectorXd RateIngredients::lambda(int k, int kp) const
{
    Eigen::VectorXd out(aps());
    for (int m = 0; m < aps(); ++m)
        out(m) = beta(m, k) > 0.0 ? gamma(m, k) * beta(m, kp) / beta(m, k) : 0.0;
    return out;
}

double SinrBreakdown::interference() const
{
    return bu + std::accumulate(iui.begin(), iui.end(), 0.0) + tn + tqe;
}

Eigen::VectorXd PowerCoupling::sinr(const PowerVector& q) const
{
    const Eigen::VectorXd denominator = coupling * q + noise;
    return (gain.array() * q.array() / denominator.array()).matrix();
}

namespace {

/// Shared uniform-combining shape: numerator N^2 q_k (sum gamma)^2 over
/// N^2 sum_{k'!=k} q' g2 (sum gamma beta'/beta)^2 + N sum_m signal_mk I_m + (N/rho) sum_m noise_mk.
Eigen::VectorXd uniform_sinr(const PowerVector& q, const BetaMatrix& beta, const GammaMatrix& gamma,
                             const PilotBook& pilots, const Eigen::MatrixXd& signal, const Eigen::MatrixXd& noise,
                             int N, double rho)
{
    const auto K = beta.cols();
    const double n = static_cast<double>(N);
    const Eigen::VectorXd load = beta * q;  // I_m = sum_k' q_k' beta_mk'
    const Eigen::MatrixXd proj = lambda_projection(Eigen::MatrixXd::Ones(beta.rows(), K), beta, gamma);

    Eigen::VectorXd out(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double coherent = gamma.col(k).sum();
        double contamination = 0.0;
        for (Eigen::Index kp = 0; kp < K; ++kp)
            if (kp != k && pilots.gram2(k, kp) > 0.0)
                contamination += q(kp) * pilots.gram2(k, kp) * proj(k, kp) * proj(k, kp);
        const double den = n * n * contamination + n * signal.col(k).dot(load) + n / rho * noise.col(k).sum();
        out(k) = n * n * q(k) * coherent * coherent / den;
    }
    return out;
}

}  // namespace

Eigen::VectorXd sinr_case1(const PowerVector& q, const BetaMatrix& beta, const GammaMatrix& gamma,
                           const PilotBook& pilots, const Eigen::VectorXd& c_tot_per_ap, int N, double rho)
{
    check_dims(q, beta, gamma, pilots);
    check_statistics(beta, gamma);
    if (c_tot_per_ap.size() != beta.rows())
        throw std::invalid_argument("sinr_case1: C_tot vector does not match M");
    const Eigen::MatrixXd scaled = ((c_tot_per_ap.array() + 1.0).matrix().asDiagonal() * gamma);
    return uniform_sinr(q, beta, gamma, pilots, scaled, scaled, N, rho);
}

Eigen::VectorXd sinr_case2(const PowerVector& q, const BetaMatrix& beta, const GammaMatrix& gamma,
                           const PilotBook& pilots, double w_z, const Eigen::VectorXd& levels_per_ap, int N, double rho)
{
    check_dims(q, beta, gamma, pilots);
    check_statistics(beta, gamma);
    const Eigen::VectorXd levels = levels_check(levels_per_ap, beta.rows());
    Eigen::MatrixXd signal(beta.rows(), beta.cols());
    Eigen::MatrixXd noise(beta.rows(), beta.cols());
    for (Eigen::Index m = 0; m < beta.rows(); ++m) {
        const double a = distortion_factor(w_z, levels(m));
        for (Eigen::Index k = 0; k < beta.cols(); ++k) {
            signal(m, k) = a * (2.0 * beta(m, k) - gamma(m, k)) + gamma(m, k);
            noise(m, k) = (a + 1.0) * gamma(m, k);
        }
    }
    return uniform_sinr(q, beta, gamma, pilots, signal, noise, N, rho);
}

std::vector<SinrBreakdown> breakdown_case1(const PowerVector& q, const BetaMatrix& beta, const GammaMatrix& gamma,
                                           const PilotBook& pilots, const Eigen::VectorXd& c_tot_per_ap, int N,
                                           double rho)
{
    check_dims(q, beta, gamma, pilots);
    check_statistics(beta, gamma);
    const auto M = beta.rows();
    const auto K = beta.cols();
    const double n = static_cast<double>(N);
    const Eigen::VectorXd load = beta * q;
    const Eigen::MatrixXd proj = lambda_projection(Eigen::MatrixXd::Ones(M, K), beta, gamma);
    // (k, k') entry sum_m gamma_mk beta_mk'.
    const Eigen::MatrixXd cross = gamma.transpose() * beta;

    std::vector<SinrBreakdown> out(static_cast<std::size_t>(K));
    for (Eigen::Index k = 0; k < K; ++k) {
        auto& b = out[static_cast<std::size_t>(k)];
        const double coherent = gamma.col(k).sum();
        b.ds2 = rho * n * n * q(k) * coherent * coherent;
        b.bu = rho * n * q(k) * cross(k, k);
        b.iui.assign(static_cast<std::size_t>(K), 0.0);
        for (Eigen::Index kp = 0; kp < K; ++kp) {
            if (kp == k)
                continue;
            b.iui[static_cast<std::size_t>(kp)] = rho * n * q(kp) * cross(k, kp) +
                                                  rho * n * n * q(kp) * pilots.gram2(k, kp) * proj(k, kp) * proj(k, kp);
        }
        b.tn = n * gamma.col(k).sum();
        double tqe = 0.0;
        for (Eigen::Index m = 0; m < M; ++m)
            tqe += c_tot_per_ap(m) * gamma(m, k) * (rho * load(m) + 1.0);
        b.tqe = n * tqe;
    }
    return out;
}

RateIngredients rate_ingredients(const BetaMatrix& beta, const GammaMatrix& gamma, double w_z,
                                 const Eigen::VectorXd& levels_per_ap)
{
    if (beta.rows() != gamma.rows() || beta.cols() != gamma.cols())
        throw std::invalid_argument("rate_ingredients: beta and gamma dimensions differ");
    check_statistics(beta, gamma);
    const Eigen::VectorXd levels = levels_check(levels_per_ap, beta.rows());

    RateIngredients ing;
    ing.gamma = gamma;
    ing.beta = beta;
    ing.upsilon.resize(beta.rows(), beta.cols());
    ing.r.resize(beta.rows(), beta.cols());
    for (Eigen::Index m = 0; m < beta.rows(); ++m) {
        const double a = distortion_factor(w_z, levels(m));
        for (Eigen::Index k = 0; k < beta.cols(); ++k) {
            ing.upsilon(m, k) = a * (2.0 * beta(m, k) - gamma(m, k)) + gamma(m, k);
            ing.r(m, k) = (a + 1.0) * gamma(m, k);
        }
    }
    return ing;
}

RateIngredients case1_ingredients(const BetaMatrix& beta, const GammaMatrix& gamma, const Eigen::VectorXd& c_tot_per_ap)
{
    if (beta.rows() != gamma.rows() || beta.cols() != gamma.cols())
        throw std::invalid_argument("case1_ingredients: beta and gamma dimensions differ");
    if (c_tot_per_ap.size() != beta.rows())
        throw std::invalid_argument("case1_ingredients: C_tot vector does not match M");
    check_statistics(beta, gamma);
    RateIngredients ing;
    ing.gamma = gamma;
    ing.beta = beta;
    ing.upsilon = (c_tot_per_ap.array() + 1.0).matrix().asDiagonal() * gamma;
    ing.r = ing.upsilon;
    return ing;
}

ReceiverWeights uniform_weights(int M, int K)
{
    return ReceiverWeights::Constant(M, K, 1.0 / std::sqrt(static_cast<double>(M)));
}

ReceiverWeights normalize_weights(const ReceiverWeights& u, const GammaMatrix& gamma)
{
    ReceiverWeights out = u;
    for (Eigen::Index k = 0; k < u.cols(); ++k) {
        const double norm = u.col(k).norm();
        if (!(norm > 0.0))
            throw std::invalid_argument("normalize_weights: zero weight vector for user " + std::to_string(k));
        out.col(k) /= norm;
        if (out.col(k).dot(gamma.col(k)) < 0.0)
            out.col(k) = -out.col(k);
    }
    return out;
}

PowerCoupling power_coupling(const ReceiverWeights& u, const RateIngredients& ing, const PilotBook& pilots, int N,
                             double rho)
{
    const auto M = ing.gamma.rows();
    const auto K = ing.gamma.cols();
    if (u.rows() != M || u.cols() != K || pilots.gram2.rows() != K)
        throw std::invalid_argument("power_coupling: dimension mismatch");
    const double n = static_cast<double>(N);
    const Eigen::ArrayXXd u2 = u.array().square();
    const Eigen::MatrixXd proj = lambda_projection(u, ing.beta, ing.gamma);

    PowerCoupling pc;
    pc.gain = (n * n) * (u.array() * ing.gamma.array()).colwise().sum().square().transpose().matrix();
    pc.coupling = n * (u2 * ing.upsilon.array()).matrix().transpose() * ing.beta;
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index kp = 0; kp < K; ++kp)
            if (kp != k && pilots.gram2(k, kp) > 0.0)
                pc.coupling(k, kp) += n * n * pilots.gram2(k, kp) * proj(k, kp) * proj(k, kp);
    pc.noise = (n / rho) * (u2 * ing.r.array()).colwise().sum().transpose().matrix();
    return pc;
}

Eigen::VectorXd sinr_with_weights(const ReceiverWeights& u, const PowerVector& q, const RateIngredients& ing,
                                  const PilotBook& pilots, int N, double rho)
{
    if (q.size() != ing.users())
        throw std::invalid_argument("sinr_with_weights: power vector does not match K");
    return power_coupling(u, ing, pilots, N, rho).sinr(q);
}

WeightedRates rate_with_weights(const ReceiverWeights& u, const PowerVector& q, const RateIngredients& ing,
                                const PilotBook& pilots, int N, double rho)
{
    const auto M = ing.gamma.rows();
    const auto K = ing.gamma.cols();
    if (u.rows() != M || u.cols() != K || q.size() != K)
        throw std::invalid_argument("rate_with_weights: dimension mismatch");
    for (Eigen::Index k = 0; k < K; ++k)
        if (std::abs(u.col(k).norm() - 1.0) > 1e-9)
            throw std::invalid_argument("rate_with_weights: weight column " + std::to_string(k) + " is not unit norm");

    const double n = static_cast<double>(N);
    const Eigen::VectorXd load = ing.beta * q;
    const Eigen::ArrayXXd u2 = u.array().square();
    const Eigen::MatrixXd proj = lambda_projection(u, ing.beta, ing.gamma);
    // (k, k') entry sum_m u_mk^2 gamma_mk beta_mk'.
    const Eigen::MatrixXd cross = (u2 * ing.gamma.array()).matrix().transpose() * ing.beta;

    WeightedRates out;
    out.sinr = sinr_with_weights(u, q, ing, pilots, N, rho);
    out.rate = out.sinr.unaryExpr([](double s) { return rate_from_sinr(s); });
    out.breakdown.resize(static_cast<std::size_t>(K));
    for (Eigen::Index k = 0; k < K; ++k) {
        auto& b = out.breakdown[static_cast<std::size_t>(k)];
        const double coherent = u.col(k).dot(ing.gamma.col(k));
        b.ds2 = rho * n * n * q(k) * coherent * coherent;
        b.bu = rho * n * q(k) * cross(k, k);
        b.iui.assign(static_cast<std::size_t>(K), 0.0);
        for (Eigen::Index kp = 0; kp < K; ++kp) {
            if (kp == k)
                continue;
            b.iui[static_cast<std::size_t>(kp)] = n * rho * q(kp) * cross(k, kp) +
                                                  n * n * rho * q(kp) * pilots.gram2(k, kp) * proj(k, kp) * proj(k, kp);
        }
        b.tn = n * (u2.col(k) * ing.gamma.array().col(k)).sum();
        double tqe = 0.0;
        for (Eigen::Index m = 0; m < M; ++m) {
            const double g = ing.gamma(m, k);
            tqe += u2(m, k) * ((ing.upsilon(m, k) - g) * rho * load(m) + ing.r(m, k) - g);
        }
        b.tqe = n * tqe;
    }
    return out;
}

}  // namespace cfmimo
