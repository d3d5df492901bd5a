#include "doctest.h"

#include "ndlab/gauss.hpp"
#include "ndlab/harness.hpp"

#include <cmath>

using namespace ndlab;

TEST_CASE("fit_rate on power laws")
{
    std::vector<std::pair<double, double>> s;
    for (double t : log_spaced(1.0, 1e4, 5)) s.emplace_back(t, 2.0 * std::pow(t, -1.5));
    const RateFit f = fit_rate(s, 0.5);
    CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(f.points >= 8);
    CHECK(fit_rate_decades(s, 2.0).slope == doctest::Approx(-1.5).epsilon(1e-12));
    s.back().second = 0.0;
    CHECK_THROWS_AS(fit_rate(s, 1.0), DegenerateWindow);
}

TEST_CASE("decreasing_over looks only at the window")
{
    std::vector<std::pair<double, double>> s{{1, 1}, {2, 3}, {10, 2}, {20, 1}, {100, 0.5}};
    CHECK(decreasing_over(s, 1.0));
    CHECK_FALSE(decreasing_over(s, 2.0));
}

TEST_CASE("log_spaced endpoints")
{
    const auto t = log_spaced(0.01, 100.0, 2);
    REQUIRE(t.size() == 9);
    CHECK(t.front() == 0.01);
    CHECK(t.back() == 100.0);
}

TEST_CASE("sigma snapshot times land on the requested sigma")
{
    const ProblemParams p{2.0, 0.5, 1.0, 1};
    const auto ts = sigma_snapshot_times(p, 1.0, 100.0, 4);
    CHECK(sigma(p, ts.front()) == doctest::Approx(1.0));
    CHECK(sigma(p, ts.back()) == doctest::Approx(100.0));
}

TEST_CASE("ode convergence error of uniform fields")
{
    const ProblemParams p{2.0, 0.5, 1.0, 1};
    const GridField u(GridSpec{1, 5.0, 10}, zeta(p, 1.5, 3.0));
    CHECK(ode_convergence_error(p, u, 3.0) == doctest::Approx(zeta(p, 1.5, 3.0) / zeta(p, 1.0, 3.0) - 1.0));
    CHECK(ode_convergence_error(p, GridField(GridSpec{1, 5.0, 10}, zeta(p, 1.0, 3.0)), 3.0) ==
          doctest::Approx(0.0));
}

TEST_CASE("zero perturbation gives zero errors and M")
{
    const ProblemParams p{2.0, 0.5, 1.0, 1};
    SolverConfig c;
    c.grid = {1, 20.0, 200};
    c.snapshot_times = sigma_snapshot_times(p, 1.0, 10.0, 10);
    const Trajectory tr = solve_original(p, InitialPerturbation::zero(), c);
    const GridField phi(c.grid);
    const RateReport r = thm11_series(p, tr, phi, kInf, 2.0);
    for (double e : r.raw_errors) CHECK(e == 0.0);
    CHECK(r.verdict == Verdict::Pass);
    const ExpansionReport m = estimate_M(p, tr, 1.0);
    for (const auto& [nu, v] : *m.M_constants) CHECK(v == 0.0);
}

TEST_CASE("rate report CSV and text")
{
    RateReport r;
    r.experiment_id = "demo";
    for (double t : log_spaced(1.0, 100.0, 10)) {
        r.times.push_back(t);
        r.sigmas.push_back(t);
        r.raw_errors.push_back(1.0 / t);
        r.compensated_errors.push_back(std::pow(t, -0.5));
    }
    r.predicted_exponent = -0.25;
    r.evaluate();
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.fit.slope == doctest::Approx(-0.5));
    CHECK(r.series_csv().rfind("t,sigma,raw_error,compensated_error\n", 0) == 0);
    CHECK(r.csv_row().rfind("demo,", 0) == 0);
    CHECK(r.text_block().find("verdict            pass") != std::string::npos);
    r.inputs_reliable = false;
    r.evaluate();
    CHECK(r.verdict == Verdict::Inconclusive);
}

TEST_CASE("finite horizon check refuses m >= alpha")
{
    Trajectory tr;
    tr.params = {2.0, 0.5, 1.0, 1};
    CHECK_THROWS_AS(finite_horizon_check(tr.params, tr), RegimeError);
}
