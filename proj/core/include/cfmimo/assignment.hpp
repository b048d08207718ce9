#pragma once

#include <vector>

#include "cfmimo/scenario.hpp"

namespace cfmimo {

struct BudgetSplit {
    int users = 0;  ///< K_m, active users per AP
    int bits = 0;   ///< alpha, bits per real dimension
};

/// Every K_m in [1, K] paired with the largest alpha >= 1 such that K_m * alpha <= budget.
std::vector<BudgetSplit> enumerate_budget(int budget, int K);

struct ActiveSetPlan {
    std::vector<std::vector<int>> sets;  ///< per-AP active users, ascending ids
    std::vector<int> set_cap;            ///< K_m per AP
    std::vector<int> bits;               ///< alpha_m per AP

    bool serves(int m, int k) const;
    /// Number of APs whose set contains user k.
    int coverage(int k) const;
};

/// Each AP keeps its K_m strongest users (ties to the lower id). A user left
/// without any AP is inserted at its strongest AP, which evicts its weakest
/// member that another AP also serves. If every member there is served only by
/// that AP, the next-strongest AP is tried. Requires M * K_m >= K.
ActiveSetPlan build_active_sets(const BetaMatrix& beta, int users_per_ap, int bits = 0);

/// gamma with entries of inactive (m, k) pairs set to zero.
GammaMatrix masked_stats(const GammaMatrix& gamma, const ActiveSetPlan& plan);

}  // namespace cfmimo
