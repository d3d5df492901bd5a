#pragma once

// Property and acceptance suites shared by the selftest subcommand, the
// acceptance binary and the unit tests.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ndlab::checks {

struct CheckResult {
    std::string id;
    std::string description;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    /// Mutation used to confirm that the suite can fail.
    enum class Fault { None, HermiteSign };
    Fault fault = Fault::None;
    std::uint64_t seed = 0;
};

/// Invariants and worked examples of every module.
std::vector<CheckResult> property_suite(const SuiteOptions& opts = {});

/// Acceptance criteria 1-9, one result each, in order.
std::vector<CheckResult> acceptance_suite(const SuiteOptions& opts = {});

std::string format_table(const std::vector<CheckResult>& results);

/// Property suite followed by the acceptance criteria, with a table on `out`.
/// Returns 0 when everything passes, 3 otherwise.
int run_selftest(const SuiteOptions& opts, std::ostream& out);

/// Runs `body` with exceptions turned into failures and the wall time recorded.
CheckResult timed_check(std::string id, std::string description,
                        const std::function<void(CheckResult&)>& body);

} // namespace ndlab::checks
