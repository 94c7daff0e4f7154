#include <benchmark/benchmark.h>

#include <qprospect/composite.hpp>
#include <qprospect/entangle.hpp>
#include <qprospect/random.hpp>

namespace qp = qprospect;

namespace {

void BM_ProspectLattice(benchmark::State& state) {
    const auto d = state.range(0);
    qp::random::Engine rng(11);
    const auto rho = qp::random::pure_composite(qp::Dims{d, d}, rng);
    const auto b = qp::random::gaussian_vector(d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(qp::prospect_lattice(rho, b, true));
    state.SetComplexityN(d);
}
BENCHMARK(BM_ProspectLattice)->RangeMultiplier(2)->Range(2, 32)->Complexity();

void BM_JointTable(benchmark::State& state) {
    const auto d = state.range(0);
    qp::random::Engine rng(12);
    const auto rho = qp::random::mixed_composite(qp::Dims{d, d}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(qp::joint_table(rho));
}
BENCHMARK(BM_JointTable)->RangeMultiplier(2)->Range(2, 32);

void BM_EntanglementProduction(benchmark::State& state) {
    const auto d = state.range(0);
    qp::random::Engine rng(13);
    const auto rho = qp::random::mixed_composite(qp::Dims{d, d}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(qp::entanglement_production(rho));
}
BENCHMARK(BM_EntanglementProduction)->RangeMultiplier(2)->Range(2, 16);

}  // namespace
