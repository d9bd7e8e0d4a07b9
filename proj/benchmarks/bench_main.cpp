#include "lopf/lpmodel.hpp"
#include "lopf/network.hpp"
#include "lopf/simplex.hpp"
#include "lopf/tsam.hpp"

#include <benchmark/benchmark.h>

using namespace lopf;

static void BM_SolveReference(benchmark::State& state) {
    auto net = synthesize_network(3, static_cast<int>(state.range(0)), 1);
    auto desc = AggregationDescriptor::identity(net.snapshots.count());
    auto lp = build_lp(net, desc);
    for (auto _ : state) {
        auto r = solve(lp);
        benchmark::DoNotOptimize(r.objective);
    }
    state.counters["rows"] = static_cast<double>(lp.constraints.size());
    state.counters["cols"] = static_cast<double>(lp.variables.size());
}
BENCHMARK(BM_SolveReference)->Arg(48)->Arg(168)->Unit(benchmark::kMillisecond);

static void BM_BuildLp(benchmark::State& state) {
    auto net = synthesize_network(5, static_cast<int>(state.range(0)), 1);
    auto desc = AggregationDescriptor::identity(net.snapshots.count());
    for (auto _ : state) {
        auto lp = build_lp(net, desc);
        benchmark::DoNotOptimize(lp.variables.size());
    }
}
BENCHMARK(BM_BuildLp)->Arg(168)->Arg(720)->Unit(benchmark::kMillisecond);

static void BM_WardChain(benchmark::State& state) {
    auto net = synthesize_network(3, static_cast<int>(state.range(0)), 1);
    auto m = normalize(net);
    for (auto _ : state) {
        auto a = ward_cluster(m, 1, 24, Adjacency::chain);
        benchmark::DoNotOptimize(a.labels.size());
    }
}
BENCHMARK(BM_WardChain)->Arg(168)->Arg(720)->Unit(benchmark::kMillisecond);

static void BM_WardDays(benchmark::State& state) {
    auto net = synthesize_network(3, static_cast<int>(state.range(0)), 1);
    auto m = normalize(net);
    for (auto _ : state) {
        auto a = ward_cluster(m, 24, 4, Adjacency::none);
        benchmark::DoNotOptimize(a.labels.size());
    }
}
BENCHMARK(BM_WardDays)->Arg(168)->Arg(720)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
