#include "doctest.h"

#include "ndlab/errors.hpp"
#include "ndlab/profiles.hpp"

#include <cmath>

using namespace ndlab;

TEST_CASE("regimes follow the sign of m - alpha")
{
    CHECK(ProblemParams{2.0, 0.5, 1.0, 1}.regime() == Regime::Algebraic);
    CHECK(ProblemParams{0.5, 0.5, 1.0, 1}.regime() == Regime::Exponential);
    CHECK(ProblemParams{0.5, 0.5 + 0.5 * kBranchTolerance, 1.0, 1}.regime() == Regime::Exponential);
    CHECK(ProblemParams{0.5, 0.75, 1.0, 1}.regime() == Regime::FiniteHorizon);
}

TEST_CASE("zeta solves the source ODE")
{
    const ProblemParams p{2.0, 0.5, 1.0, 1};
    // zeta' = sqrt(zeta), zeta(0) = 1  ->  zeta = (1 + t/2)^2
    CHECK(zeta(p, 1.0, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
    const ProblemParams lin{1.0, 0.0, 1.0, 1};
    CHECK(zeta(lin, 3.0, 2.5) == doctest::Approx(5.5));
    CHECK(zeta(p, 0.7, 0.0) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("sigma in the linear case is t")
{
    const ProblemParams lin{1.0, 0.0, 1.0, 1};
    for (double t : {0.1, 1.0, 17.0}) CHECK(sigma(lin, t) == doctest::Approx(t).epsilon(1e-14));
}

TEST_CASE("tau* closed form at m=0.5, alpha=0.75")
{
    CHECK(tau_star(ProblemParams{0.5, 0.75, 1.0, 1}) == 2.0);
    CHECK_THROWS_AS((void)tau_star(ProblemParams{2.0, 0.5, 1.0, 1}), RegimeError);
    const ProblemParams p{0.5, 0.75, 1.0, 1};
    CHECK(sigma(p, 1e6) < 2.0);
    CHECK(sigma(p, 1e6) > 1.99);
    CHECK_THROWS_AS((void)time_of_tau(p, 2.5), OutOfRangeError);
}

TEST_CASE("logarithmic branch is continuous across m = alpha")
{
    const ProblemParams at{0.6, 0.6, 1.2, 1};
    const ProblemParams near{0.6 + 1e-5, 0.6, 1.2, 1};
    for (double t : {0.5, 5.0, 50.0}) CHECK(sigma(at, t) == doctest::Approx(sigma(near, t)).epsilon(1e-4));
}

TEST_CASE("time_of_tau inverts sigma")
{
    for (const ProblemParams& p : {ProblemParams{2.0, 0.5, 1.0, 1}, ProblemParams{0.8, 0.2, 1.7, 1},
                                   ProblemParams{0.4, 0.4, 0.8, 1}, ProblemParams{0.5, 0.75, 1.0, 1}})
        for (double t : {0.01, 1.0, 30.0}) CHECK(time_of_tau(p, sigma(p, t)) == doctest::Approx(t).epsilon(1e-11));
}

TEST_CASE("h decays in the algebraic regime and is refused for m < alpha")
{
    const ProblemParams p{2.0, 0.5, 1.0, 1};
    CHECK(h_decay(p, 0.0) == doctest::Approx(1.0));
    CHECK(h_decay(p, 10.0) < h_decay(p, 1.0));
    CHECK_THROWS_AS((void)h_decay(ProblemParams{0.5, 0.75, 1.0, 1}, 1.0), RegimeError);
}

TEST_CASE("profile table rows")
{
    const auto rows = profile_table(ProblemParams{2.0, 0.5, 1.0, 1}, 0.1, 100.0, 4);
    REQUIRE(rows.size() == 4);
    CHECK(rows.front().t == 0.1);
    CHECK(rows[1].t == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rows.back().t == 100.0);
    for (const auto& r : rows) CHECK(r.eta == doctest::Approx(r.zeta));
    CHECK_THROWS_AS(profile_table(ProblemParams{}, 1.0, 0.5, 4), DomainError);
}

TEST_CASE("parameter validation names the field")
{
    try {
        ProblemParams{2.0, 1.0, 1.0, 1}.validate();
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
    CHECK_THROWS_AS(ProblemParams({-1.0, 0.5, 1.0, 1}).validate(), DomainError);
    CHECK_THROWS_AS(ProblemParams({2.0, 0.5, 1.0, 3}).validate(), DomainError);
}
