#include "cfmimo/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "cfmimo/rng.hpp"

namespace cfmimo {

EstimationStats estimation_stats(const BetaMatrix& beta, const PilotBook& pilots, double p_p, int tau)
{
    if (!(p_p > 0.0))
        throw std::invalid_argument("estimation_stats: p_p must be positive");
    if (beta.cols() != pilots.users())
        throw std::invalid_argument("estimation_stats: beta and pilot book disagree on K");

    const double tpp = static_cast<double>(tau) * p_p;
    const double root = std::sqrt(tpp);
    // Row m of beta * gram2 holds sum_k' beta_mk' |phi_k^H phi_k'|^2 for every k.
    const Eigen::MatrixXd contaminated = beta * pilots.gram2.transpose();

    EstimationStats stats;
    stats.c = (root * beta.array() / (tpp * contaminated.array() + 1.0)).matrix();
    stats.gamma = (root * beta.array() * stats.c.array()).matrix();
    return stats;
}

void mmse_estimate(const ChannelRealization& channels, const PilotBook& pilots, const EstimationStats& stats,
                   double p_p, int tau, Rng& rng, ChannelEstimate& out, double noise_scale)
{
    const int M = channels.aps();
    const int K = channels.users();
    const int N = channels.antennas;
    const int T = pilots.length();
    const double root = std::sqrt(static_cast<double>(tau) * p_p);
    // Complex overlaps phi_k^H phi_k'.
    const Eigen::MatrixXcd overlap = pilots.phi.adjoint() * pilots.phi;

    out.antennas = N;
    out.g.resize(channels.g.rows(), K);
    Eigen::MatrixXcd noise(N, T);
    for (int m = 0; m < M; ++m) {
        for (int t = 0; t < T; ++t)
            for (int n = 0; n < N; ++n)
                noise(n, t) = noise_scale * rng.complex_normal();
        const auto g_m = channels.g.middleRows(static_cast<Eigen::Index>(m) * N, N);
        // Column k: sqrt(tau p_p) sum_k' g_mk' phi_k^H phi_k' + W_p,m phi_k.
        Eigen::MatrixXcd despread = root * g_m * overlap.transpose() + noise * pilots.phi;
        for (int k = 0; k < K; ++k)
            out.block(m, k) = stats.c(m, k) * despread.col(k);
    }
}

ChannelEstimate mmse_estimate(const ChannelRealization& channels, const PilotBook& pilots,
                              const EstimationStats& stats, double p_p, int tau, std::uint64_t seed,
                              double noise_scale)
{
    if (channels.users() != pilots.users() || stats.c.rows() != channels.aps() || stats.c.cols() != channels.users())
        throw std::invalid_argument("mmse_estimate: inconsistent dimensions");
    Rng rng(seed);
    ChannelEstimate out;
    mmse_estimate(channels, pilots, stats, p_p, tau, rng, out, noise_scale);
    return out;
}

}  // namespace cfmimo
