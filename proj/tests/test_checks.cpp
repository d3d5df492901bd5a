#include "doctest.h"

#include "ndlab/checks/oracles.hpp"
#include "ndlab/checks/suite.hpp"

#include <cmath>
#include <stdexcept>

using namespace ndlab;

TEST_CASE("property suite passes")
{
    for (const auto& r : checks::property_suite()) {
        CAPTURE(r.id);
        CAPTURE(r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("flipping the Hermite sign fails the derivative invariant only")
{
    checks::SuiteOptions opts;
    opts.fault = checks::SuiteOptions::Fault::HermiteSign;
    for (const auto& r : checks::property_suite(opts)) {
        CAPTURE(r.id);
        CHECK(r.passed == (r.id != "gauss.deriv_fd"));
    }
}

TEST_CASE("oracles")
{
    CHECK(oracle::rk4_zeta(0.0, 1.0, 2.0) == doctest::Approx(3.0));
    CHECK(oracle::integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0));
    CHECK(oracle::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0) == doctest::Approx(1.0));
    CHECK(oracle::bisection([](double x) { return x * x; }, 2.0, 0.0, 2.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    const long double d3 =
        oracle::fd_derivative([](long double x) { return std::sin(x); }, 0.4L, 3, 0.1L);
    CHECK(static_cast<double>(d3) == doctest::Approx(-std::cos(0.4)).epsilon(1e-9));
    CHECK(oracle::gauss_moment(2, 0.5, 1.0) == doctest::Approx(0.25 + 2.0));
    CHECK(oracle::gauss_deriv_moment(1, 1, 3.0) == doctest::Approx(-1.0));
}

TEST_CASE("table formatting")
{
    std::vector<checks::CheckResult> rs(2);
    rs[0] = {"a", "first", true, "fine", 0.5};
    rs[1] = {"bb", "second", false, "broken", 1.0};
    const std::string t = checks::format_table(rs);
    CHECK(t.find("PASS") != std::string::npos);
    CHECK(t.find("FAIL") != std::string::npos);
    const auto r = checks::timed_check("x", "throws", [](checks::CheckResult&) { throw std::runtime_error("boom"); });
    CHECK_FALSE(r.passed);
    CHECK(r.detail.find("boom") != std::string::npos);
}
