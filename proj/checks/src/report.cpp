#include "ndlab/checks/suite.hpp"

#include "ndlab/experiment.hpp"

#include <chrono>
#include <exception>
#include <ostream>

#include <fmt/core.h>

namespace ndlab::checks {

CheckResult timed_check(std::string id, std::string description, const std::function<void(CheckResult&)>& body)
{
    CheckResult r;
    r.id = std::move(id);
    r.description = std::move(description);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = fmt::format("threw: {}", e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string format_table(const std::vector<CheckResult>& results)
{
    std::size_t width = 4;
    for (const auto& r : results) width = std::max(width, r.id.size());
    std::string out = fmt::format("{:<{}}  {:<4}  {:>8}  {}\n", "check", width, "", "seconds", "detail");
    for (const auto& r : results)
        out += fmt::format("{:<{}}  {:<4}  {:>8.2f}  {}\n", r.id, width, r.passed ? "PASS" : "FAIL", r.seconds,
                           r.detail);
    return out;
}

int run_selftest(const SuiteOptions& opts, std::ostream& out)
{
    auto results = property_suite(opts);
    const auto acceptance = acceptance_suite(opts);
    results.insert(results.end(), acceptance.begin(), acceptance.end());
    out << format_table(results);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    out << fmt::format("{} checks, {} passed, {} failed\n", results.size(), results.size() - failed, failed);
    return failed == 0 ? kExitOk : kExitSelftest;
}

} // namespace ndlab::checks
