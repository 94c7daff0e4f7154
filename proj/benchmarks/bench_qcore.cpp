#include <benchmark/benchmark.h>

#include <qprospect/dynamics.hpp>
#include <qprospect/qcore.hpp>
#include <qprospect/random.hpp>

namespace qp = qprospect;

namespace {

qp::ComplexMatrix random_hermitian(qp::Index d, qp::random::Engine& rng) {
    std::normal_distribution<double> g;
    qp::ComplexMatrix m(d, d);
    for (qp::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
    return 0.5 * (m + m.adjoint());
}

void BM_TensorProduct(benchmark::State& state) {
    const auto d = state.range(0);
    qp::random::Engine rng(1);
    const auto a = qp::random::density(d, rng).matrix();
    const auto b = qp::random::density(d, rng).matrix();
    for (auto _ : state) benchmark::DoNotOptimize(qp::tensor_product(a, b));
    state.SetComplexityN(d);
}
BENCHMARK(BM_TensorProduct)->RangeMultiplier(2)->Range(2, 32)->Complexity(benchmark::oNSquared);

void BM_PartialTrace(benchmark::State& state) {
    const auto d = state.range(0);
    qp::random::Engine rng(2);
    const auto rho = qp::random::mixed_composite(qp::Dims{d, d}, rng).matrix();
    const auto factor = state.range(1) == 0 ? qp::Factor::A : qp::Factor::B;
    for (auto _ : state) benchmark::DoNotOptimize(qp::partial_trace(rho, qp::Dims{d, d}, factor));
}
BENCHMARK(BM_PartialTrace)->ArgsProduct({{2, 4, 8, 16}, {0, 1}});

void BM_MatrixExponential(benchmark::State& state) {
    qp::random::Engine rng(3);
    const auto h = random_hermitian(state.range(0), rng);
    for (auto _ : state) benchmark::DoNotOptimize(qp::matrix_exponential(h, 0.7));
}
BENCHMARK(BM_MatrixExponential)->RangeMultiplier(2)->Range(2, 64);

void BM_SpectralNorm(benchmark::State& state) {
    qp::random::Engine rng(4);
    const auto rho = qp::random::density(state.range(0), rng).matrix();
    for (auto _ : state) benchmark::DoNotOptimize(qp::spectral_norm(rho));
}
BENCHMARK(BM_SpectralNorm)->RangeMultiplier(4)->Range(4, 256);

void BM_PiecewisePropagator(benchmark::State& state) {
    qp::random::Engine rng(5);
    const auto n_pieces = static_cast<int>(state.range(0));
    std::vector<qp::PotentialPiece> pieces;
    for (int k = 0; k < n_pieces; ++k) pieces.push_back({0.01 * k, random_hermitian(4, rng)});
    const qp::HamiltonianSpec h(random_hermitian(4, rng), std::move(pieces));
    for (auto _ : state) benchmark::DoNotOptimize(qp::propagator(h, 0.0, 0.01 * n_pieces));
    state.SetItemsProcessed(state.iterations() * n_pieces);
}
BENCHMARK(BM_PiecewisePropagator)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace
