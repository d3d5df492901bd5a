#include "doctest.h"

#include "ndlab/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace ndlab;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

} // namespace

TEST_CASE("reductions agree across block boundaries")
{
    for (std::size_t n : {std::size_t{1}, std::size_t{7}, kernels::kReductionBlock - 1, kernels::kReductionBlock,
                          kernels::kReductionBlock + 1, 3 * kernels::kReductionBlock + 17}) {
        CAPTURE(n);
        const auto a = random_vector(n, 1), b = random_vector(n, 2);
        auto w = random_vector(n, 3);
        for (auto& x : w) x = std::abs(x);
        CHECK(kernels::par::dot(a, b) == doctest::Approx(kernels::ref::dot(a, b)).epsilon(1e-12));
        CHECK(kernels::par::max_abs(a) == kernels::ref::max_abs(a));
        CHECK(kernels::par::sum_abs_pow(a, 1.0) == doctest::Approx(kernels::ref::sum_abs_pow(a, 1.0)).epsilon(1e-12));
        CHECK(kernels::par::sum_abs_pow(a, 3.0) == doctest::Approx(kernels::ref::sum_abs_pow(a, 3.0)).epsilon(1e-12));
        CHECK(kernels::par::weighted_abs_sum(a, w) ==
              doctest::Approx(kernels::ref::weighted_abs_sum(a, w)).epsilon(1e-12));
    }
}

TEST_CASE("parallel reductions are reproducible")
{
    const auto a = random_vector(5 * kernels::kReductionBlock + 3, 4);
    const double first = kernels::par::sum_abs_pow(a, 2.0);
    for (int k = 0; k < 5; ++k) CHECK(kernels::par::sum_abs_pow(a, 2.0) == first);
}

TEST_CASE("convolutions agree")
{
    const int n = 33;
    const auto in = random_vector(static_cast<std::size_t>(n * n), 5);
    const auto taps = random_vector(static_cast<std::size_t>(2 * n - 1), 6);
    std::vector<double> x(static_cast<std::size_t>(n)), y(x.size());
    kernels::par::convolve_line(std::span(in).first(static_cast<std::size_t>(n)), taps, x);
    kernels::ref::convolve_line(std::span(in).first(static_cast<std::size_t>(n)), taps, y);
    for (int i = 0; i < n; ++i) CHECK(x[static_cast<std::size_t>(i)] == doctest::Approx(y[static_cast<std::size_t>(i)]));
    std::vector<double> p(in.size()), q(in.size());
    for (int axis : {0, 1}) {
        kernels::par::convolve_square_axis(in, n, axis, taps, p);
        kernels::ref::convolve_square_axis(in, n, axis, taps, q);
        for (std::size_t k = 0; k < p.size(); ++k) CHECK(p[k] == doctest::Approx(q[k]).epsilon(1e-13));
    }
}

TEST_CASE("five-point operator agrees")
{
    const int n = 20;
    const auto v = random_vector(static_cast<std::size_t>(n * n), 7);
    auto fx = random_vector(static_cast<std::size_t>((n + 1) * n), 8), fy = random_vector(fx.size(), 9);
    for (auto& x : fx) x = 1.0 + std::abs(x);
    for (auto& x : fy) x = 1.0 + std::abs(x);
    std::vector<double> a(v.size()), b(v.size());
    kernels::par::five_point_apply(v, n, 0.3, 2.0, fx, fy, a);
    kernels::ref::five_point_apply(v, n, 0.3, 2.0, fx, fy, b);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}
