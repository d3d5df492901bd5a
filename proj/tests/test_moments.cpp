#include "doctest.h"

#include "ndlab/gauss.hpp"
#include "ndlab/moments.hpp"
#include "ndlab/perturbation.hpp"

#include <cmath>
#include <numbers>

using namespace ndlab;

TEST_CASE("multi-index basics")
{
    const MultiIndex nu({2, 1});
    CHECK(nu.order() == 3);
    CHECK(nu.factorial() == 2.0);
    CHECK(nu.to_string() == "2-1");
    CHECK(MultiIndex::parse("2-1") == nu);
    CHECK(MultiIndex({1, 1}).precedes(nu));
    CHECK_FALSE(MultiIndex({0, 2}).precedes(nu));
    CHECK(strict_predecessors(MultiIndex({1, 1})).size() == 3);
    const auto graded = enumerate_graded(2, 2);
    REQUIRE(graded.size() == 6);
    CHECK(graded[1] == MultiIndex({1, 0}));
    CHECK(graded[2] == MultiIndex({0, 1}));
    CHECK(integer_order(2.7) == 2);
}

TEST_CASE("zeroth coefficient is the mass")
{
    const GridSpec spec{1, 30.0, 1200};
    const GridField f = InitialPerturbation::gaussian({0.4, 0.0}, 1.0, 2.0).sample(spec);
    CHECK(moment_coefficient(f, MultiIndex({0}), 1.0) == doctest::Approx(2.0 * std::sqrt(std::numbers::pi)));
}

TEST_CASE("shifted kernel: m_1 = -c for G(x - c, t + 1)")
{
    const GridSpec spec{1, 40.0, 1600};
    const GridField f = GridField::sample(spec, [](std::span<const double> x) {
        const double y[1] = {x[0] - 0.7};
        return gauss(y, 3.0);
    });
    MomentSolver ms(f, 2.0);
    CHECK(ms.coefficient(MultiIndex({0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ms.coefficient(MultiIndex({1})) == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("expansion residual moments vanish")
{
    const GridSpec spec{2, 25.0, 160};
    const GridField f = InitialPerturbation::gaussian({0.6, -0.4}, 1.2, 1.0).sample(spec) +
                        InitialPerturbation::smooth_bump({-1.0, 0.5}, 2.0, 0.3).sample(spec);
    const ExpansionReport e = expand(f, 2.0, 1.0);
    CHECK(e.valid);
    CHECK(e.coefficients.size() == 6);
    for (const auto& [omega, v] : e.residual_moments) CHECK(std::abs(v) < 1e-7 * weighted_norm(f, 2.0));
}

TEST_CASE("expansion report serialization round-trips")
{
    const GridField f = InitialPerturbation::gaussian({0.3, 0.0}, 1.0, 1.0).sample(GridSpec{1, 20.0, 400});
    ExpansionReport e = expand(f, 3.0, 0.5);
    e.notes.push_back("note with = sign");
    const ExpansionReport back = ExpansionReport::parse(e.serialize());
    CHECK(back.serialize() == e.serialize());
    CHECK(back.K == e.K);
    CHECK(back.valid == e.valid);
}

TEST_CASE("E functional is a homogeneous norm")
{
    const GridSpec spec{1, 30.0, 1200};
    const GridField f = InitialPerturbation::gaussian({0.5, 0.0}, 1.0, 1.0).sample(spec);
    CHECK(e_functional(GridField(spec), 1.0, kInf, 2.0) == 0.0);
    CHECK(e_functional(2.0 * f, 1.0, kInf, 2.0) == doctest::Approx(2.0 * e_functional(f, 1.0, kInf, 2.0)));
    CHECK(e_functional(f, 2.0, 1.0, 2.0) > e_functional(f, 1.0, 1.0, 2.0));
    CHECK_THROWS_AS((void)e_functional(f, 1.0, 1.0, 0.0), DomainError);
}
