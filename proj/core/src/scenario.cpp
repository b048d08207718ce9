#include "cfmimo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cfmimo/rng.hpp"

namespace cfmimo {

double noise_power_mw(double bandwidth_hz, double temperature_k, double noise_figure_db)
{
    constexpr double kBoltzmann = 1.380649e-23;
    const double watts = bandwidth_hz * kBoltzmann * temperature_k * std::pow(10.0, noise_figure_db / 10.0);
    return watts * 1e3;
}

void SystemConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw std::invalid_argument(std::string("invalid configuration: ") + what);
    };
    require(M >= 1, "M must be >= 1");
    require(N >= 1, "N must be >= 1");
    require(K >= 1, "K must be >= 1");
    require(tau >= 1, "tau must be >= 1");
    require(tau <= tau_c, "tau must not exceed tau_c");
    require(tau_f() > 0, "tau_c - tau must be positive");
    require(D > 0.0, "D must be positive");
    require(pbar_p > 0.0 && rhobar > 0.0 && p_n > 0.0, "powers must be positive");
    require(w_y >= 0.0 && w_g >= 0.0 && w_z >= 0.0, "clip factors must be nonnegative");
    require(alpha1 >= 1 && alpha2 >= 1, "ADC bit widths must be >= 1");
    require(C_bh > 0.0, "C_bh must be positive");
    require(T_c > 0.0, "T_c must be positive");
    require(epsilon > 0.0, "epsilon must be positive");
    require(max_iters >= 1, "max_iters must be >= 1");
    require(pmax > 0.0, "pmax must be positive");
    require(path_loss.d0_m > 0.0 && path_loss.d1_m >= path_loss.d0_m, "path-loss breakpoints must satisfy 0 < d0 <= d1");
    require(path_loss.sigma_sh_db >= 0.0, "sigma_sh must be nonnegative");
    require(pilot_mode != PilotMode::orthogonal || tau >= K, "orthogonal pilots need tau >= K");
}

Topology drop_topology(const SystemConfig& config, std::uint64_t seed)
{
    if (!(config.D > 0.0))
        throw std::invalid_argument("drop_topology: D must be positive");
    Rng rng(seed);
    Topology topo;
    topo.aps.reserve(static_cast<std::size_t>(config.M));
    topo.users.reserve(static_cast<std::size_t>(config.K));
    for (int m = 0; m < config.M; ++m)
        topo.aps.push_back({rng.uniform(0.0, config.D), rng.uniform(0.0, config.D)});
    for (int k = 0; k < config.K; ++k)
        topo.users.push_back({rng.uniform(0.0, config.D), rng.uniform(0.0, config.D)});
    return topo;
}

double path_loss_db(double distance_m, const PathLossParams& params)
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("path_loss_db: distance must be positive");
    const double d_km = distance_m / 1000.0;
    const double d0_km = params.d0_m / 1000.0;
    const double d1_km = params.d1_m / 1000.0;
    if (distance_m > params.d1_m)
        return -params.loss_db - 35.0 * std::log10(d_km);
    if (distance_m > params.d0_m)
        return -params.loss_db - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d_km);
    return -params.loss_db - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d0_km);
}

BetaMatrix large_scale(const Topology& topology, const PathLossParams& params, std::uint64_t seed)
{
    const auto M = static_cast<Eigen::Index>(topology.aps.size());
    const auto K = static_cast<Eigen::Index>(topology.users.size());
    Rng rng(seed);
    BetaMatrix beta(M, K);
    for (Eigen::Index k = 0; k < K; ++k) {
        for (Eigen::Index m = 0; m < M; ++m) {
            const auto& ap = topology.aps[static_cast<std::size_t>(m)];
            const auto& ue = topology.users[static_cast<std::size_t>(k)];
            const double d = std::max(std::hypot(ap.x - ue.x, ap.y - ue.y), 1e-9);
            const double z = rng.normal();
            double db = path_loss_db(d, params);
            if (d > params.d1_m)
                db += params.sigma_sh_db * z;
            beta(m, k) = std::pow(10.0, db / 10.0);
        }
    }
    return beta;
}

PilotBook pilots_from(const Eigen::MatrixXcd& phi)
{
    PilotBook book;
    book.phi = phi;
    book.gram2 = (phi.adjoint() * phi).cwiseAbs2();
    return book;
}

PilotBook make_pilots(int K, int tau, PilotMode mode, std::uint64_t seed)
{
    if (K < 1 || tau < 1)
        throw std::invalid_argument("make_pilots: K and tau must be >= 1");
    if (mode == PilotMode::orthogonal) {
        if (tau < K)
            throw std::invalid_argument("make_pilots: orthogonal pilots need tau >= K");
        PilotBook book;
        book.phi = Eigen::MatrixXcd::Identity(tau, K);
        book.gram2 = Eigen::MatrixXd::Identity(K, K);
        return book;
    }

    // Each user draws one column of the tau-point DFT basis.
    Rng rng(seed);
    std::vector<int> column(static_cast<std::size_t>(K));
    for (auto& c : column)
        c = static_cast<int>(rng.below(static_cast<std::uint64_t>(tau)));

    PilotBook book;
    book.phi.resize(tau, K);
    const double scale = 1.0 / std::sqrt(static_cast<double>(tau));
    for (int k = 0; k < K; ++k) {
        for (int n = 0; n < tau; ++n) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(n) *
                                 static_cast<double>(column[static_cast<std::size_t>(k)]) / tau;
            book.phi(n, k) = std::polar(scale, angle);
        }
    }
    book.gram2.resize(K, K);
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j)
            book.gram2(k, j) = column[static_cast<std::size_t>(k)] == column[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
    return book;
}

void sample_channel(const BetaMatrix& beta, Rng& rng, ChannelRealization& out)
{
    const auto M = beta.rows();
    const auto K = beta.cols();
    const int N = out.antennas;
    out.g.resize(M * N, K);
    for (Eigen::Index k = 0; k < K; ++k) {
        for (Eigen::Index m = 0; m < M; ++m) {
            const double amp = std::sqrt(beta(m, k));
            for (int n = 0; n < N; ++n)
                out.g(m * N + n, k) = amp * rng.complex_normal();
        }
    }
}

ChannelRealization sample_channel(const BetaMatrix& beta, int N, std::uint64_t seed)
{
    if (N < 1)
        throw std::invalid_argument("sample_channel: N must be >= 1");
    if ((beta.array() < 0.0).any())
        throw std::invalid_argument("sample_channel: beta must be nonnegative");
    Rng rng(seed);
    ChannelRealization out;
    out.antennas = N;
    sample_channel(beta, rng, out);
    return out;
}

}  // namespace cfmimo
