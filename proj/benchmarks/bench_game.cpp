#include <benchmark/benchmark.h>

#include <qprospect/game.hpp>

namespace qp = qprospect;

namespace {

const qp::GameSpec kGame({0.05, 0.05, 0.45, 0.45});

void BM_QuarterLaw(benchmark::State& state) {
    const auto dist = state.range(0) == 0
                          ? qp::InterferenceDistribution::uniform()
                          : qp::InterferenceDistribution::tabulated({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    for (auto _ : state) benchmark::DoNotOptimize(qp::quarter_law(dist));
}
BENCHMARK(BM_QuarterLaw)->Arg(0)->Arg(1);

void BM_MonteCarloCohort(benchmark::State& state) {
    qp::CohortOptions opt;
    opt.n_pairs = static_cast<std::uint64_t>(state.range(0));
    opt.workers = static_cast<unsigned>(state.range(1));
    opt.symmetry = qp::Symmetry::Broken;
    opt.seed = 42;
    const auto dist = qp::InterferenceDistribution::uniform();
    for (auto _ : state) benchmark::DoNotOptimize(qp::monte_carlo_cohort(kGame, dist, opt));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloCohort)->ArgsProduct({{1 << 16, 1 << 20}, {1, 4}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
