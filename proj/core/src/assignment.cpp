#include "cfmimo/assignment.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cfmimo {

std::vector<BudgetSplit> enumerate_budget(int budget, int K)
{
    if (budget < 1 || K < 1)
        throw std::invalid_argument("enumerate_budget: budget and K must be >= 1");
    std::vector<BudgetSplit> out;
    for (int users = 1; users <= std::min(K, budget); ++users)
        out.push_back({users, budget / users});
    return out;
}

bool ActiveSetPlan::serves(int m, int k) const
{
    const auto& set = sets[static_cast<std::size_t>(m)];
    return std::binary_search(set.begin(), set.end(), k);
}

int ActiveSetPlan::coverage(int k) const
{
    int count = 0;
    for (std::size_t m = 0; m < sets.size(); ++m)
        count += serves(static_cast<int>(m), k) ? 1 : 0;
    return count;
}

ActiveSetPlan build_active_sets(const BetaMatrix& beta, int users_per_ap, int bits)
{
    const int M = static_cast<int>(beta.rows());
    const int K = static_cast<int>(beta.cols());
    if (users_per_ap < 1 || users_per_ap > K)
        throw std::invalid_argument("build_active_sets: K_m must lie in [1, " + std::to_string(K) + "]");

    ActiveSetPlan plan;
    plan.sets.resize(static_cast<std::size_t>(M));
    plan.set_cap.assign(static_cast<std::size_t>(M), users_per_ap);
    plan.bits.assign(static_cast<std::size_t>(M), bits);

    // Stronger first; equal gains keep the lower id first.
    auto stronger = [&](int m) {
        return [&beta, m](int a, int b) { return beta(m, a) > beta(m, b) || (beta(m, a) == beta(m, b) && a < b); };
    };
    std::vector<int> order(static_cast<std::size_t>(K));
    for (int m = 0; m < M; ++m) {
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + users_per_ap, order.end(), stronger(m));
        auto& set = plan.sets[static_cast<std::size_t>(m)];
        set.assign(order.begin(), order.begin() + users_per_ap);
        std::sort(set.begin(), set.end());
    }

    std::vector<int> coverage(static_cast<std::size_t>(K), 0);
    for (const auto& set : plan.sets)
        for (int k : set)
            ++coverage[static_cast<std::size_t>(k)];

    if (static_cast<long long>(M) * users_per_ap < K)
        throw std::invalid_argument("build_active_sets: M * K_m < K leaves some user unserved");

    // Orphan repair: strongest AP with room or with an evictable member.
    std::vector<int> aps(static_cast<std::size_t>(M));
    for (int orphan = 0; orphan < K; ++orphan) {
        if (coverage[static_cast<std::size_t>(orphan)] > 0)
            continue;
        std::iota(aps.begin(), aps.end(), 0);
        std::stable_sort(aps.begin(), aps.end(), [&](int a, int b) { return beta(a, orphan) > beta(b, orphan); });
        bool placed = false;
        for (int m : aps) {
            auto& set = plan.sets[static_cast<std::size_t>(m)];
            if (static_cast<int>(set.size()) >= users_per_ap) {
                int victim = -1;
                for (int k : set)
                    if (coverage[static_cast<std::size_t>(k)] > 1 && (victim < 0 || stronger(m)(victim, k)))
                        victim = k;
                if (victim < 0)
                    continue;
                set.erase(std::find(set.begin(), set.end(), victim));
                --coverage[static_cast<std::size_t>(victim)];
            }
            set.insert(std::upper_bound(set.begin(), set.end(), orphan), orphan);
            ++coverage[static_cast<std::size_t>(orphan)];
            placed = true;
            break;
        }
        if (!placed)
            throw std::runtime_error("build_active_sets: no AP can take user " + std::to_string(orphan));
    }
    return plan;
}

GammaMatrix masked_stats(const GammaMatrix& gamma, const ActiveSetPlan& plan)
{
    if (static_cast<Eigen::Index>(plan.sets.size()) != gamma.rows())
        throw std::invalid_argument("masked_stats: plan does not match M");
    GammaMatrix out = GammaMatrix::Zero(gamma.rows(), gamma.cols());
    for (Eigen::Index m = 0; m < gamma.rows(); ++m)
        for (int k : plan.sets[static_cast<std::size_t>(m)])
            out(m, k) = gamma(m, k);
    return out;
}

}  // namespace cfmimo
