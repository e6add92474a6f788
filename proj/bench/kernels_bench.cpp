#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "mdevm/benchmarks.hpp"
#include "mdevm/diversity.hpp"
#include "mdevm/kernels.hpp"

using namespace mdevm;

namespace {

PointCloud random_cloud(std::size_t n, std::size_t d)
{
    std::mt19937_64 g(n * 131 + d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointCloud c(d);
    c.coords.resize(n * d);
    for (auto& v : c.coords)
        v = u(g);
    return c;
}

// Args: {points, dimension}
void pairwise_args(benchmark::internal::Benchmark* b)
{
    for (long d : {10, 100, 1000})
        b->Args({2000, d});
    b->Args({10000, 10});
    b->Unit(benchmark::kMillisecond);
}

void BM_PairwiseSerial(benchmark::State& state)
{
    const auto c = random_cloud(state.range(0), state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::pairwise_distance(c));
}
BENCHMARK(BM_PairwiseSerial)->Apply(pairwise_args);

void BM_PairwiseParallel(benchmark::State& state)
{
    const auto c = random_cloud(state.range(0), state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::parallel::pairwise_distance(c));
}
BENCHMARK(BM_PairwiseParallel)->Apply(pairwise_args);

void BM_CentroidSerial(benchmark::State& state)
{
    const auto c = random_cloud(state.range(0), state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::centroid_distance(c));
}
BENCHMARK(BM_CentroidSerial)->Args({10000, 1000})->Unit(benchmark::kMillisecond);

void BM_CentroidParallel(benchmark::State& state)
{
    const auto c = random_cloud(state.range(0), state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::parallel::centroid_distance(c));
}
BENCHMARK(BM_CentroidParallel)->Args({10000, 1000})->Unit(benchmark::kMillisecond);

// Rastrigin is cheap enough that this mostly measures scheduling overhead.
std::vector<std::vector<double>> random_points(std::size_t n, std::size_t d)
{
    const auto c = random_cloud(n, d);
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.emplace_back(c.row(i).begin(), c.row(i).end());
    return pts;
}

void BM_EvaluateSerial(benchmark::State& state)
{
    const auto pts = random_points(state.range(0), 100);
    std::vector<double> out(pts.size());
    const Objective f = [](std::span<const double> x) { return functions::rastrigin(x); };
    for (auto _ : state) {
        kernels::serial::evaluate(pts, f, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_EvaluateSerial)->Arg(50)->Arg(5000);

void BM_EvaluateParallel(benchmark::State& state)
{
    const auto pts = random_points(state.range(0), 100);
    std::vector<double> out(pts.size());
    const Objective f = [](std::span<const double> x) { return functions::rastrigin(x); };
    for (auto _ : state) {
        kernels::parallel::evaluate(pts, f, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_EvaluateParallel)->Arg(50)->Arg(5000);

void BM_TrialCloud(benchmark::State& state)
{
    TrialSimulation sim;
    sim.dimension = state.range(0);
    sim.factor = FactorMode::vector_random(0.0, 2.0);
    sim.samples = 10000;
    sim.seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(trial_cloud(sim));
}
BENCHMARK(BM_TrialCloud)->Arg(10)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
