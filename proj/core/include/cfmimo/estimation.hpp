#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "cfmimo/scenario.hpp"

namespace cfmimo {

/// Long-term MMSE estimation statistics.
struct EstimationStats {
    Eigen::MatrixXd c;     ///< M x K MMSE scaling
    GammaMatrix gamma;     ///< M x K mean-square estimate quality, sqrt(tau p_p) beta c
};

/// Channel estimates in the same stacked layout as ChannelRealization.
using ChannelEstimate = ChannelRealization;

EstimationStats estimation_stats(const BetaMatrix& beta, const PilotBook& pilots, double p_p, int tau);

/// Draws the pilot-phase noise and forms the MMSE estimate of every g_mk.
/// `noise_scale` multiplies the pilot noise; 1 is the physical model.
ChannelEstimate mmse_estimate(const ChannelRealization& channels, const PilotBook& pilots,
                              const EstimationStats& stats, double p_p, int tau, std::uint64_t seed,
                              double noise_scale = 1.0);

class Rng;
void mmse_estimate(const ChannelRealization& channels, const PilotBook& pilots, const EstimationStats& stats,
                   double p_p, int tau, Rng& rng, ChannelEstimate& out, double noise_scale = 1.0);

}  // namespace cfmimo
