// Serial reference vs OpenMP kernels on the sizes the solver actually sees.

#include "ndlab/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

namespace k = ndlab::kernels;

std::vector<double> random_vector(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

std::vector<double> gaussian_taps(int n, double h)
{
    std::vector<double> taps(2 * static_cast<std::size_t>(n) - 1);
    for (int d = -(n - 1); d < n; ++d)
        taps[static_cast<std::size_t>(d + n - 1)] = std::exp(-(d * h) * (d * h) / 4.0) * h / std::sqrt(4.0 * M_PI);
    return taps;
}

template <auto Fn>
void bm_dot(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_vector(n, 1), b = random_vector(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <auto Fn>
void bm_sum_abs_pow(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_vector(n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(a, 1.5));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <auto Fn>
void bm_convolve_axis(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto in = random_vector(static_cast<std::size_t>(n) * n, 4);
    const auto taps = gaussian_taps(n, 40.0 / n);
    std::vector<double> out(in.size());
    for (auto _ : state) {
        Fn(in, n, 0, taps, out);
        benchmark::ClobberMemory();
    }
}

template <auto Fn>
void bm_five_point(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto nn = static_cast<std::size_t>(n);
    const auto v = random_vector(nn * nn, 5);
    const std::vector<double> fx((nn + 1) * nn, 1.0), fy(nn * (nn + 1), 1.0);
    std::vector<double> out(v.size());
    for (auto _ : state) {
        Fn(v, n, 0.01, 100.0, fx, fy, out);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(v.size()));
}

} // namespace

BENCHMARK(bm_dot<k::ref::dot>)->Name("dot/ref")->Range(1 << 12, 1 << 22);
BENCHMARK(bm_dot<k::par::dot>)->Name("dot/par")->Range(1 << 12, 1 << 22);
BENCHMARK(bm_sum_abs_pow<k::ref::sum_abs_pow>)->Name("sum_abs_pow/ref")->Range(1 << 12, 1 << 22);
BENCHMARK(bm_sum_abs_pow<k::par::sum_abs_pow>)->Name("sum_abs_pow/par")->Range(1 << 12, 1 << 22);
BENCHMARK(bm_convolve_axis<k::ref::convolve_square_axis>)->Name("convolve_square_axis/ref")->RangeMultiplier(2)->Range(64, 256);
BENCHMARK(bm_convolve_axis<k::par::convolve_square_axis>)->Name("convolve_square_axis/par")->RangeMultiplier(2)->Range(64, 256);
BENCHMARK(bm_five_point<k::ref::five_point_apply>)->Name("five_point_apply/ref")->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(bm_five_point<k::par::five_point_apply>)->Name("five_point_apply/par")->RangeMultiplier(2)->Range(64, 1024);

BENCHMARK_MAIN();
