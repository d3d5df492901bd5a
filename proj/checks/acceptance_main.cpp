// One line per acceptance criterion; exit status 3 if any fails.

#include "ndlab/checks/suite.hpp"
#include "ndlab/experiment.hpp"

#include <fmt/core.h>

int main()
{
    int failed = 0;
    for (const auto& r : ndlab::checks::acceptance_suite()) {
        fmt::print("{} {}: {} [{:.1f}s] {}\n", r.passed ? "PASS" : "FAIL", r.id, r.description, r.seconds, r.detail);
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    }
    return failed == 0 ? ndlab::kExitOk : ndlab::kExitSelftest;
}
