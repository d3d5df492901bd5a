#include "doctest.h"

#include "ndlab/gauss.hpp"
#include "ndlab/harness.hpp"
#include "ndlab/solver.hpp"

#include <cmath>

using namespace ndlab;

namespace {

SolverConfig small(std::vector<double> times)
{
    SolverConfig c;
    c.grid = {1, 20.0, 200};
    c.snapshot_times = std::move(times);
    return c;
}

} // namespace

TEST_CASE("solver config validation")
{
    SolverConfig c = small({1.0});
    c.cfl_safety = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small({2.0, 1.0});
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small({1.0});
    c.grid.dim = 2;
    CHECK_THROWS_AS((void)solve_original(ProblemParams{2.0, 0.5, 1.0, 1}, InitialPerturbation::zero(), c),
                    ConfigError);
}

TEST_CASE("trajectory layout")
{
    const Trajectory tr = solve_original(ProblemParams{2.0, 0.5, 1.0, 1},
                                         InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.2), small({0.5, 1.0}));
    REQUIRE(tr.times.size() == 3);
    CHECK(tr.times[0] == 0.0);
    CHECK(tr.times[2] == 1.0);
    CHECK(tr.fields.size() == 3);
    CHECK(tr.diagnostics.size() == 3);
    CHECK(tr.c_low == 1.0);
    CHECK(tr.c_high == doctest::Approx(1.2));
    CHECK(tr.stats.steps > 0);
    CHECK(tr.stats.worst_lower_margin >= 0.0);
    CHECK(tr.stats.worst_upper_margin >= 0.0);
}

TEST_CASE("solution stays between the comparison profiles")
{
    const ProblemParams p{0.8, 0.2, 1.0, 1};
    const auto phi = InitialPerturbation::smooth_bump({0.0, 0.0}, 2.0, -0.4);
    const Trajectory tr = solve_original(p, phi, small({0.3, 1.0, 3.0}));
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const double t = tr.times[k];
        for (double u : tr.fields[k].values) {
            CHECK(u >= zeta(p, tr.c_low, t) * (1.0 - 1e-12));
            CHECK(u <= zeta(p, tr.c_high, t) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("rescaled solver refuses the finite horizon regime")
{
    CHECK_THROWS_AS((void)solve_rescaled(ProblemParams{0.5, 0.75, 1.0, 1}, InitialPerturbation::zero(), small({1.0})),
                    RegimeError);
}

TEST_CASE("repeat solves are bit-identical")
{
    const ProblemParams p{2.0, 0.5, 1.0, 2};
    SolverConfig c;
    c.grid = {2, 10.0, 48};
    c.snapshot_times = {0.2, 0.5};
    const auto phi = InitialPerturbation::gaussian({0.5, 0.0}, 1.0, 0.3);
    const Trajectory a = solve_original(p, phi, c);
    const Trajectory b = solve_original(p, phi, c);
    CHECK(a.fields.back().values == b.fields.back().values);
    CHECK(a.stats.linear_iterations == b.stats.linear_iterations);
}

TEST_CASE("coefficients of the rescaled equation")
{
    const ProblemParams p{2.0, 0.5, 1.0, 1};
    CHECK(coeff_A(p, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(source_F(p, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(flux_potential(p, 1.0, 0.0) == 0.0);
    const double g[1] = {2.0};
    const double w = 0.3;
    CHECK(flux_H(p, 1.0, w, g)[0] == doctest::Approx((coeff_A(p, 1.0, w) - 1.0) * 2.0));
    // d/dw potential = A - 1
    const double h = 1e-5;
    const double slope = (flux_potential(p, 1.0, w + h) - flux_potential(p, 1.0, w - h)) / (2.0 * h);
    CHECK(slope == doctest::Approx(coeff_A(p, 1.0, w) - 1.0).epsilon(1e-7));
    const ProblemParams lin{1.0, 0.0, 1.0, 1};
    CHECK(coeff_A(lin, 3.0, 0.7) == 1.0);
    CHECK(source_F(lin, 3.0, 0.7) == 0.0);
}

TEST_CASE("gradient norm of a linear ramp")
{
    const GridField f = GridField::sample(GridSpec{1, 1.0, 10}, [](std::span<const double> x) { return 3.0 * x[0]; });
    CHECK(gradient_linf(f) == doctest::Approx(3.0));
}
