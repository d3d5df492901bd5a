#include "doctest.h"

#include "ndlab/errors.hpp"
#include "ndlab/io.hpp"
#include "ndlab/perturbation.hpp"

#include <cstdlib>

using namespace ndlab;

TEST_CASE("field CSV round-trip")
{
    for (int dim : {1, 2}) {
        const GridSpec spec{dim, 3.0, dim == 1 ? 12 : 6};
        const GridField f = InitialPerturbation::gaussian({0.2, 0.1}, 1.0, 0.7).sample(spec);
        const std::string text = field_to_csv(f);
        CHECK(text.rfind(dim == 1 ? "x,value\n" : "x,y,value\n", 0) == 0);
        const GridField g = field_from_csv(text);
        CHECK(g.spec == f.spec);
        CHECK(g.values == f.values);
    }
}

TEST_CASE("malformed field CSV")
{
    CHECK_THROWS_AS(field_from_csv(""), DomainError);
    CHECK_THROWS_AS(field_from_csv("a,b\n1,2\n"), DomainError);
    CHECK_THROWS_AS(field_from_csv("x,value\n-0.5,1\n0.5,abc\n"), DomainError);
    CHECK_THROWS_AS(field_from_csv("x,value\n-0.5,1\n0.7,1\n"), DomainError);
    CHECK_THROWS_AS(field_from_csv("x,y,value\n0,0,1\n0,1,1\n1,0,1\n"), DomainError);
}

TEST_CASE("output directory override")
{
    ::unsetenv(kOutputDirEnv);
    CHECK(resolve_output_dir("a/b") == "a/b");
    ::setenv(kOutputDirEnv, "/tmp/elsewhere", 1);
    CHECK(resolve_output_dir("a/b") == "/tmp/elsewhere");
    ::setenv(kOutputDirEnv, "", 1);
    CHECK(resolve_output_dir("a/b") == "a/b");
    ::unsetenv(kOutputDirEnv);
}

TEST_CASE("perturbation shapes")
{
    const auto bump = InitialPerturbation::smooth_bump({0.0, 0.0}, 2.0, 0.3);
    const GridField f = bump.sample(GridSpec{1, 4.0, 80});
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, v);
    CHECK(peak <= 0.3);
    CHECK(peak > 0.29);
    CHECK(f.values.front() == 0.0);
    CHECK(bump.infimum() == 0.0);
    CHECK(bump.supremum() == 0.3);
    CHECK_THROWS_AS(InitialPerturbation::gaussian({0.0, 0.0}, 1.0, -1.5).validate(1.0), DomainError);
    CHECK_NOTHROW(InitialPerturbation::gaussian({0.0, 0.0}, 1.0, -0.5).validate(1.0));
}
