#include "doctest.h"

#include "ndlab/config.hpp"
#include "ndlab/io.hpp"

#include <cmath>
#include <filesystem>

using namespace ndlab;

namespace {

const std::string kConfigDir = NDLAB_CONFIG_DIR;

std::string field_of(const std::string& text)
{
    try {
        parse_config(text).validate();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::string with(std::string text, const std::string& from, const std::string& to)
{
    return text.replace(text.find(from), from.size(), to);
}

constexpr const char* kMinimal = "[problem]\nm = 2\nalpha = 0.5\n[phi]\nkind = zero\n"
                                 "[snapshots]\nkind = list\ntimes = 1 2\n";

} // namespace

TEST_CASE("shipped configs round-trip")
{
    for (const auto& entry : std::filesystem::directory_iterator(kConfigDir)) {
        CAPTURE(entry.path().string());
        const ExperimentConfig a = load_config(entry.path().string());
        const std::string text = serialize_config(a);
        const ExperimentConfig b = parse_config(text);
        CHECK(a == b);
        CHECK(serialize_config(b) == text);
    }
}

TEST_CASE("defaults")
{
    const ExperimentConfig c = parse_config(kMinimal);
    CHECK(c.params.lambda == 1.0);
    CHECK(c.params.dim == 1);
    CHECK(c.phi.is_zero());
    CHECK(c.solver.stepper == Stepper::Adaptive);
    CHECK(c.output_dir == "ndlab_out");
    CHECK(c.seed == 0);
}

TEST_CASE("errors name the offending field")
{
    CHECK(field_of(with(kMinimal, "alpha = 0.5", "alpha = 1.0")) == "problem.alpha");
    CHECK(field_of(with(kMinimal, "alpha = 0.5", "alpha = x")) == "problem.alpha");
    CHECK(field_of(with(kMinimal, "m = 2\n", "")) == "problem.m");
    CHECK(field_of(std::string(kMinimal) + "[grid]\npoints_per_axis = 7\n") == "grid.points_per_axis");
    CHECK(field_of(std::string(kMinimal) + "[solver]\nstepper = rk4\n") == "solver.stepper");
    CHECK(field_of(std::string(kMinimal) + "[solver]\nboundary = periodic\n") == "solver.boundary");
    CHECK(field_of(std::string(kMinimal) + "[analysis]\nlist = thm13 1\n") == "analysis.list");
    CHECK(field_of(with(kMinimal, "times = 1 2", "times = 2 1")) == "snapshots.times");
    CHECK(field_of(std::string(kMinimal) + "[output]\ncolour = red\n") == "output.colour");
    CHECK(field_of("[problem]\nm = 0.5\nalpha = 0.75\n[phi]\nkind = zero\n[snapshots]\nkind = list\ntimes = 1\n"
                   "[analysis]\nlist = thm11 inf 2\n") == "analysis.list");
}

TEST_CASE("analysis entries")
{
    const Analysis a = Analysis::parse("thm12 inf 1");
    CHECK(a.kind == Analysis::Kind::Thm12);
    CHECK(std::isinf(a.q));
    CHECK(a.K == 1.0);
    CHECK(Analysis::parse(a.to_string()) == a);
    CHECK(Analysis::parse("expand_only 2").K == 2.0);
}

TEST_CASE("snapshot plans")
{
    ExperimentConfig c = parse_config("[problem]\nm = 2\nalpha = 0.5\n[phi]\nkind = zero\n"
                                      "[snapshots]\nkind = log_time\nfrom = 1\nto = 100\nper_decade = 2\n");
    c.resolve(".");
    CHECK(c.solver.snapshot_times.size() == 5);
    CHECK(c.solver.snapshot_times.back() == 100.0);
}

TEST_CASE("tabulated phi loads relative to the config")
{
    const auto dir = std::filesystem::temp_directory_path() / "ndlab_tab_test";
    std::filesystem::create_directories(dir);
    const GridSpec spec{1, 10.0, 40};
    write_field_csv((dir / "phi.csv").string(), InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.2).sample(spec));
    ExperimentConfig c = parse_config("[problem]\nm = 2\nalpha = 0.5\n[phi]\nkind = tabulated\ntable = phi.csv\n"
                                      "[grid]\nhalf_width = 10\npoints_per_axis = 40\n[snapshots]\nkind = list\ntimes = 1\n");
    c.resolve(dir.string());
    REQUIRE(c.phi.table.has_value());
    CHECK(c.phi.table->values.size() == 40);
    ExperimentConfig bad = parse_config("[problem]\nm = 2\nalpha = 0.5\n[phi]\nkind = tabulated\ntable = phi.csv\n"
                                        "[grid]\nhalf_width = 12\npoints_per_axis = 40\n[snapshots]\nkind = list\ntimes = 1\n");
    CHECK_THROWS_AS(bad.resolve(dir.string()), ConfigError);
    std::filesystem::remove_all(dir);
}
