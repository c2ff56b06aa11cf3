// Serial reference against the OpenMP kernel for the per-triangle energy terms,
// and the same comparison for a whole E_Theta evaluation.

#include "support/surfaces.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <numbers>

using namespace uniformize;

namespace {

// Delaunay metrics are cached per size so only the kernels are timed.
const DelaunayResult& delaunay_sphere(int n)
{
    static std::map<int, DelaunayResult> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::mt19937_64 rng(7);
        const DecoratedMetric M = testing::random_surface(0, n, rng, 0.5, 1);
        it = cache.emplace(n, make_delaunay(M, PartialDecoration::finite(std::vector<double>(n, 0.0)),
                                            DelaunayMode::Plain))
                 .first;
    }
    return it->second;
}

void BM_TriangleTermsSerial(benchmark::State& state)
{
    const DelaunayResult& D = delaunay_sphere(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(triangle_terms_serial(D.metric.tri, D.lambda_tilde));
    state.SetItemsProcessed(state.iterations() * D.metric.tri.num_triangles());
}

void BM_TriangleTermsParallel(benchmark::State& state)
{
    const DelaunayResult& D = delaunay_sphere(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(triangle_terms_parallel(D.metric.tri, D.lambda_tilde));
    state.SetItemsProcessed(state.iterations() * D.metric.tri.num_triangles());
}

void e_theta_bench(benchmark::State& state, Exec exec)
{
    const int n = static_cast<int>(state.range(0));
    const DelaunayResult& D = delaunay_sphere(n);
    const ConeAngleTarget theta{std::vector<double>(n, 2 * std::numbers::pi * (n - 2) / n)};
    EnergyOptions opts;
    opts.exec = exec;
    const std::vector<double> u(n, 0.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(e_theta(D.metric, theta, u, opts).value);
}

void BM_EThetaSerial(benchmark::State& state)
{
    e_theta_bench(state, Exec::Serial);
}

void BM_EThetaParallel(benchmark::State& state)
{
    e_theta_bench(state, Exec::Parallel);
}

} // namespace

BENCHMARK(BM_TriangleTermsSerial)->Arg(1000)->Arg(10000)->Arg(50000);
BENCHMARK(BM_TriangleTermsParallel)->Arg(1000)->Arg(10000)->Arg(50000);
BENCHMARK(BM_EThetaSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_EThetaParallel)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
