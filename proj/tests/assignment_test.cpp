#include "doctest.h"
#include "helpers.hpp"

#include "cfmimo/assignment.hpp"
#include "cfmimo/rng.hpp"

using namespace cfmimo;

namespace {

void check_plan(const ActiveSetPlan& plan, int K, int cap)
{
    for (const auto& set : plan.sets) {
        CHECK(static_cast<int>(set.size()) <= cap);
        CHECK(std::is_sorted(set.begin(), set.end()));
    }
    for (int k = 0; k < K; ++k)
        CHECK(plan.coverage(k) >= 1);
}

}  // namespace

TEST_CASE("budget enumeration")
{
    const auto splits = enumerate_budget(200, 40);
    REQUIRE(splits.size() == 40);
    CHECK(splits.front().users == 1);
    CHECK(splits[19].users == 20);
    CHECK(splits[19].bits == 10);
    CHECK(splits[39].users == 40);
    CHECK(splits[39].bits == 5);
    for (const auto& s : splits) {
        CHECK(s.users >= 1);
        CHECK(s.bits >= 1);
        CHECK(s.users * s.bits <= 200);
        CHECK(s.users * (s.bits + 1) > 200);
    }
    CHECK(enumerate_budget(3, 40).size() == 3);
    CHECK_THROWS_AS(enumerate_budget(0, 4), std::invalid_argument);
}

TEST_CASE("full sets and diagonal dominance")
{
    const auto in = testutil::random_instance(5, 4, 4, 1);
    const ActiveSetPlan all = build_active_sets(in.beta, 4, 5);
    for (const auto& set : all.sets)
        CHECK(set == std::vector<int>{0, 1, 2, 3});
    CHECK(masked_stats(in.gamma, all) == in.gamma);
    CHECK(all.bits[0] == 5);

    BetaMatrix beta(2, 2);
    beta << 1.0, 0.1, 0.2, 0.9;
    const ActiveSetPlan plan = build_active_sets(beta, 1);
    CHECK(plan.sets[0] == std::vector<int>{0});
    CHECK(plan.sets[1] == std::vector<int>{1});

    CHECK_THROWS_AS(build_active_sets(beta, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_active_sets(beta, 3), std::invalid_argument);
    BetaMatrix narrow(1, 3);
    narrow << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(build_active_sets(narrow, 2), std::invalid_argument);
}

TEST_CASE("orphan repair evicts a user served elsewhere")
{
    BetaMatrix beta(3, 3);
    beta << 1.0, 0.5, 0.3,
            0.9, 0.4, 0.2,
            0.2, 0.8, 0.1;
    const ActiveSetPlan plan = build_active_sets(beta, 1);
    CHECK(plan.sets[0] == std::vector<int>{2});
    CHECK(plan.sets[1] == std::vector<int>{0});
    CHECK(plan.sets[2] == std::vector<int>{1});
    check_plan(plan, 3, 1);
}

TEST_CASE("orphan repair moves on when the best AP has only sole members")
{
    BetaMatrix beta(3, 3);
    beta << 1.0, 0.0, 0.9,
            0.0, 1.0, 0.8,
            0.3, 0.5, 0.1;
    const ActiveSetPlan plan = build_active_sets(beta, 1);
    CHECK(plan.sets[0] == std::vector<int>{0});
    CHECK(plan.sets[1] == std::vector<int>{2});
    CHECK(plan.sets[2] == std::vector<int>{1});
    check_plan(plan, 3, 1);
}

TEST_CASE("ties go to the lower user id")
{
    BetaMatrix beta(2, 3);
    beta << 0.5, 0.5, 0.5,
            0.1, 0.1, 0.9;
    const ActiveSetPlan plan = build_active_sets(beta, 2);
    CHECK(plan.sets[0] == std::vector<int>{0, 1});
    CHECK(plan.sets[1] == std::vector<int>{0, 2});
    check_plan(plan, 3, 2);
}

TEST_CASE("random plans keep coverage, caps and determinism")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const int M = 1 + static_cast<int>(rng.below(8));
        const int K = 1 + static_cast<int>(rng.below(12));
        const auto in = testutil::random_instance(M, K, 1, seed);
        int cap = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
        while (M * cap < K)
            ++cap;
        const ActiveSetPlan a = build_active_sets(in.beta, cap, 200 / cap);
        check_plan(a, K, cap);
        CHECK(a.sets == build_active_sets(in.beta, cap, 200 / cap).sets);
        for (int m = 0; m < M; ++m)
            CHECK(cap * a.bits[m] <= 200);

        const GammaMatrix g = masked_stats(in.gamma, a);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                CHECK(g(m, k) == (a.serves(m, k) ? in.gamma(m, k) : 0.0));
    }
}

TEST_CASE("empty set masks a row")
{
    const auto in = testutil::random_instance(3, 2, 2, 4);
    ActiveSetPlan plan;
    plan.sets = {{0, 1}, {}, {1}};
    const GammaMatrix g = masked_stats(in.gamma, plan);
    CHECK(g.row(1).isZero());
    CHECK(g(2, 0) == 0.0);
    CHECK(g(2, 1) == in.gamma(2, 1));
    plan.sets.pop_back();
    CHECK_THROWS_AS(masked_stats(in.gamma, plan), std::invalid_argument);
}
