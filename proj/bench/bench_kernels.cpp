#include <benchmark/benchmark.h>

#include "tcam/dataprep.hpp"
#include "tcam/discover.hpp"
#include "tcam/ordering.hpp"
#include "tcam/pns.hpp"
#include "tcam/pruning.hpp"
#include "tcam/semgen.hpp"

using namespace tcam;

namespace {

// One tiered problem shared by every benchmark; range(0) is the thread count,
// so the 1-thread rows time the serial reference path.
struct Problem {
    Dataset data;
    PriorKnowledge prior;
    NeighborSets neighbors;
    Dag full;

    Problem() : prior(PriorKnowledge::trivial(12)), full(12) {
        const auto spec = random_sem(12, 0.3, 3, 11);
        data = prepare(sample(spec, 500, 12));
        prior.tiers = *spec.tiers;
        prior.normalize();
        neighbors = select_neighbors(data, prior, PnsConfig{}, 5);
        for (std::size_t k = 0; k < 12; ++k) {
            for (std::size_t l = k + 1; l < 12; ++l) full.add_edge(k, l);
        }
    }
};

const Problem& problem() {
    static const Problem p;
    return p;
}

Execution threads(const benchmark::State& state) { return Execution{static_cast<int>(state.range(0))}; }

void BM_SelectNeighbors(benchmark::State& state) {
    const auto& p = problem();
    for (auto _ : state) benchmark::DoNotOptimize(select_neighbors(p.data, p.prior, PnsConfig{}, 5, threads(state)));
}

void BM_GreedyOrderCam(benchmark::State& state) {
    const auto& p = problem();
    const RegressionContext ctx(p.data, DiscoverOptions::default_smoother());
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_order(ctx, p.neighbors, p.prior, SearchMode::Cam, {}, threads(state)));
    }
}

void BM_GreedyOrderTcam(benchmark::State& state) {
    const auto& p = problem();
    const RegressionContext ctx(p.data, DiscoverOptions::default_smoother());
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_order(ctx, p.neighbors, p.prior, SearchMode::Tcam, {}, threads(state)));
    }
}

void BM_PruneFullOrder(benchmark::State& state) {
    const auto& p = problem();
    const RegressionContext ctx(p.data, DiscoverOptions::default_smoother());
    for (auto _ : state) benchmark::DoNotOptimize(prune(ctx, p.full, {}, threads(state)));
}

}  // namespace

BENCHMARK(BM_SelectNeighbors)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GreedyOrderCam)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GreedyOrderTcam)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PruneFullOrder)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
