#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cfmimo {

/// Three-slope path loss with log-normal shadowing beyond the outer breakpoint.
/// Defaults correspond to a 1.9 GHz carrier, 15 m AP and 1.65 m user heights.
struct PathLossParams {
    double loss_db = 140.7;   ///< loss at 1 km (dB)
    double d0_m = 10.0;       ///< inner breakpoint; loss is flat below it
    double d1_m = 50.0;       ///< outer breakpoint; 35 dB/decade beyond it
    double sigma_sh_db = 8.0; ///< shadowing standard deviation (dB)
};

enum class PilotMode { orthogonal, random };

/// Thermal noise power in mW for the given bandwidth, temperature and noise figure.
double noise_power_mw(double bandwidth_hz = 20e6, double temperature_k = 290.0, double noise_figure_db = 9.0);

struct SystemConfig {
    int M = 100;          ///< access points
    int N = 2;            ///< antennas per AP
    int K = 40;           ///< single-antenna users
    int tau = 20;         ///< pilot length (symbols)
    int tau_c = 200;      ///< coherence interval (symbols)
    double D = 1000.0;    ///< side of the square area (m)
    double pbar_p = 200.0; ///< pilot power (mW)
    double rhobar = 200.0; ///< data power (mW)
    double p_n = noise_power_mw();
    double w_y = 15.0;
    double w_g = 15.0;
    double w_z = 15.0;
    int alpha1 = 9;       ///< ADC bits per real dimension, Case 1
    int alpha2 = 5;       ///< ADC bits per real dimension, Case 2
    double C_bh = 14.4e6; ///< backhaul capacity per AP (bits/s)
    double T_c = 1e-3;    ///< coherence time (s)
    double epsilon = 1e-4;
    int max_iters = 50;
    double pmax = 1.0;    ///< per-user normalized power cap
    PathLossParams path_loss{};
    PilotMode pilot_mode = PilotMode::random;
    bool rate_overhead = false; ///< scale rates by tau_f / tau_c

    int tau_f() const noexcept { return tau_c - tau; }
    double p_p() const noexcept { return pbar_p / p_n; }
    double rho() const noexcept { return rhobar / p_n; }

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Topology {
    std::vector<Point> aps;
    std::vector<Point> users;
};

/// M x K linear large-scale gains.
using BetaMatrix = Eigen::MatrixXd;
/// M x K mean-square estimate qualities.
using GammaMatrix = Eigen::MatrixXd;

struct PilotBook {
    Eigen::MatrixXcd phi;   ///< tau x K, unit-norm columns
    Eigen::MatrixXd gram2;  ///< K x K, |phi_k^H phi_k'|^2

    int users() const noexcept { return static_cast<int>(phi.cols()); }
    int length() const noexcept { return static_cast<int>(phi.rows()); }
};

/// Small-scale channels stacked per AP: rows [m*N, (m+1)*N) of column k hold g_mk.
struct ChannelRealization {
    int antennas = 0;
    Eigen::MatrixXcd g;

    auto block(int m, int k) const { return g.col(k).segment(static_cast<Eigen::Index>(m) * antennas, antennas); }
    auto block(int m, int k) { return g.col(k).segment(static_cast<Eigen::Index>(m) * antennas, antennas); }
    int aps() const noexcept { return antennas == 0 ? 0 : static_cast<int>(g.rows()) / antennas; }
    int users() const noexcept { return static_cast<int>(g.cols()); }
};

class Rng;

Topology drop_topology(const SystemConfig& config, std::uint64_t seed);

double path_loss_db(double distance_m, const PathLossParams& params);

BetaMatrix large_scale(const Topology& topology, const PathLossParams& params, std::uint64_t seed);

PilotBook make_pilots(int K, int tau, PilotMode mode, std::uint64_t seed);
PilotBook pilots_from(const Eigen::MatrixXcd& phi);

ChannelRealization sample_channel(const BetaMatrix& beta, int N, std::uint64_t seed);
void sample_channel(const BetaMatrix& beta, Rng& rng, ChannelRealization& out);

}  // namespace cfmimo
