#include <benchmark/benchmark.h>

#include "cfmimo/experiment.hpp"
#include "cfmimo/oracle.hpp"
#include "cfmimo/quantization.hpp"
#include "cfmimo/rates.hpp"
#include "cfmimo/solver.hpp"

using namespace cfmimo;

namespace {

struct Fixture {
    SystemConfig cfg;
    Drop drop;
    RateIngredients ing;

    explicit Fixture(int M, int K)
    {
        cfg.M = M;
        cfg.K = K;
        drop = draw_drop(cfg, 42, 0);
        ing = rate_ingredients(drop.beta, drop.stats.gamma, cfg.w_z,
                               Eigen::VectorXd::Constant(cfg.M, levels_from_bits(cfg.alpha2)));
    }
};

void BM_ReceiverFilter(benchmark::State& state)
{
    const Fixture f(static_cast<int>(state.range(0)), 40);
    const PowerVector q = PowerVector::Ones(f.cfg.K);
    for (auto _ : state)
        benchmark::DoNotOptimize(receiver_filter(q, f.ing, f.drop.pilots, f.cfg.N, f.cfg.rho()));
}
BENCHMARK(BM_ReceiverFilter)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_SinrWithWeights(benchmark::State& state)
{
    const Fixture f(100, static_cast<int>(state.range(0)));
    const ReceiverWeights u = uniform_weights(f.cfg.M, f.cfg.K);
    const PowerVector q = PowerVector::Ones(f.cfg.K);
    for (auto _ : state)
        benchmark::DoNotOptimize(sinr_with_weights(u, q, f.ing, f.drop.pilots, f.cfg.N, f.cfg.rho()));
}
BENCHMARK(BM_SinrWithWeights)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_PowerAllocation(benchmark::State& state)
{
    const Fixture f(100, static_cast<int>(state.range(0)));
    const ReceiverWeights u = uniform_weights(f.cfg.M, f.cfg.K);
    for (auto _ : state)
        benchmark::DoNotOptimize(power_allocation(u, f.ing, f.drop.pilots, f.cfg.N, f.cfg.rho(), f.cfg.pmax, 1e-6));
}
BENCHMARK(BM_PowerAllocation)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_MaxMinSolve(benchmark::State& state)
{
    const Fixture f(100, 40);
    const SolverOptions opts = solver_options(f.cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(maxmin_solve(f.ing, f.drop.pilots, opts));
}
BENCHMARK(BM_MaxMinSolve)->Unit(benchmark::kMillisecond);

void BM_OracleTrials(benchmark::State& state)
{
    SystemConfig cfg;
    cfg.M = 10;
    cfg.K = 4;
    const BackhaulCase c = state.range(0) == 1 ? BackhaulCase::case1 : BackhaulCase::case2;
    const OracleInstance in = make_oracle_instance(cfg, c, 42);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle_case(c, in, 1000, 7));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_OracleTrials)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
