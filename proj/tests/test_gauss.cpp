#include "doctest.h"

#include "ndlab/gauss.hpp"
#include "ndlab/perturbation.hpp"

#include <cmath>
#include <numbers>

using namespace ndlab;

TEST_CASE("Gauss kernel has unit mass in one and two dimensions")
{
    CHECK(integral(gauss_field(GridSpec{1, 30.0, 600}, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integral(gauss_field(GridSpec{2, 30.0, 200}, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("first derivative matches -x/(2t) G")
{
    for (double x : {-1.3, 0.0, 0.8}) {
        const double g = gauss_deriv_1d(0, x, 1.5);
        CHECK(gauss_deriv_1d(1, x, 1.5) == doctest::Approx(-x / 3.0 * g));
    }
    const double x2[2] = {0.3, -0.4};
    CHECK(gauss(x2, 1.0) == doctest::Approx(std::exp(-0.25 / 4.0) / (4.0 * std::numbers::pi)));
    CHECK_THROWS_AS((void)gauss_deriv_1d(1, 0.0, 0.0), DomainError);
}

TEST_CASE("g_0 is the kernel shifted by one unit of time")
{
    const double x[1] = {0.7};
    CHECK(g_kernel(MultiIndex({0}), x, 2.0) == doctest::Approx(gauss(x, 3.0)));
    CHECK(g_kernel(MultiIndex({1}), x, 2.0) == doctest::Approx(-gauss_deriv_1d(1, 0.7, 3.0)));
}

TEST_CASE("heat semigroup maps Gaussians to Gaussians")
{
    const GridSpec spec{1, 30.0, 1200};
    const GridField phi = InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 1.0).sample(spec);
    const GridField out = heat_semigroup(phi, 1.0);
    const GridField exact = GridField::sample(spec, [](std::span<const double> x) {
        return std::exp(-x[0] * x[0] / 5.0) / std::sqrt(5.0);
    });
    CHECK(lq_norm(out - exact, kInf) < 1e-12);
    CHECK(integral(out) == doctest::Approx(integral(phi)).epsilon(1e-12));
}

TEST_CASE("norms")
{
    const GridSpec spec{1, 2.0, 4};
    const GridField f(spec, std::vector<double>{1.0, -2.0, 0.5, 0.0});
    CHECK(lq_norm(f, kInf) == 2.0);
    CHECK(lq_norm(f, 1.0) == doctest::Approx(3.5));
    CHECK(lq_norm(f, 2.0) == doctest::Approx(std::sqrt(5.25)));
    CHECK(boundary_max(f) == 1.0);
    CHECK_FALSE(boundary_negligible(f, 1e-3));
    CHECK(weighted_norm(f, 0.0) == doctest::Approx(2.0 * 3.5));
}

TEST_CASE("boundary mass raises a warning")
{
    const GridSpec spec{1, 5.0, 100};
    const GridField wide = InitialPerturbation::gaussian({0.0, 0.0}, 4.0, 1.0).sample(spec);
    Warnings w;
    (void)heat_semigroup(wide, 1.0, &w);
    CHECK_FALSE(w.empty());
}
