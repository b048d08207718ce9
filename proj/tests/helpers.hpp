#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "cfmimo/estimation.hpp"
#include "cfmimo/rates.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"

namespace testutil {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Random positive statistics with gamma <= beta, on a normalized scale.
struct Instance {
    cfmimo::BetaMatrix beta;
    cfmimo::GammaMatrix gamma;
    cfmimo::PilotBook pilots;
};

inline Instance random_instance(int M, int K, int tau, std::uint64_t seed, bool random_pilots = true)
{
    cfmimo::Rng rng(seed);
    Instance in;
    in.beta.resize(M, K);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
            in.beta(m, k) = std::pow(10.0, rng.uniform(-2.0, 0.0));
    in.pilots = cfmimo::make_pilots(K, tau, random_pilots ? cfmimo::PilotMode::random : cfmimo::PilotMode::orthogonal,
                                    seed + 1);
    in.gamma = cfmimo::estimation_stats(in.beta, in.pilots, 10.0 / tau, tau).gamma;
    return in;
}

/// Uniform-draw positive power vector in (0, pmax].
inline cfmimo::PowerVector random_power(int K, std::uint64_t seed, double pmax = 1.0)
{
    cfmimo::Rng rng(seed);
    cfmimo::PowerVector q(K);
    for (int k = 0; k < K; ++k)
        q(k) = rng.uniform(0.05, 1.0) * pmax;
    return q;
}

}  // namespace testutil
