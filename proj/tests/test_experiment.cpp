#include "doctest.h"

#include "ndlab/experiment.hpp"
#include "ndlab/io.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

using namespace ndlab;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = NDLAB_CONFIG_DIR;

std::map<std::string, std::string> read_tree(const fs::path& root)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_text(e.path().string());
    return out;
}

int run_into(const std::string& config, const fs::path& out, std::string* log_text = nullptr)
{
    fs::remove_all(out);
    ::setenv(kOutputDirEnv, out.string().c_str(), 1);
    std::ostringstream log;
    const int code = run_experiment(load_config(kConfigDir + "/" + config), kConfigDir, log);
    ::unsetenv(kOutputDirEnv);
    if (log_text) *log_text = log.str();
    return code;
}

} // namespace

TEST_CASE("zero perturbation: every error functional is zero")
{
    const fs::path out = fs::temp_directory_path() / "ndlab_zero";
    REQUIRE(run_into("zero.ini", out) == kExitOk);
    const auto manifest = nlohmann::json::parse(read_text((out / "manifest.json").string()));
    for (const auto& r : manifest["reports"]) CHECK(r["verdict"] == "pass");
    const std::string series = read_text((out / "thm11_qinf_r2.series.csv").string());
    CHECK(series.rfind("t,sigma,raw_error,compensated_error\n", 0) == 0);
    CHECK(series.find(",0,0\n") != std::string::npos);
    CHECK(fs::exists(out / "snapshots" / "snap_0000.csv"));
    fs::remove_all(out);
}

TEST_CASE("linear configuration passes its exact-answer budget")
{
    const fs::path out = fs::temp_directory_path() / "ndlab_linear";
    REQUIRE(run_into("linear.ini", out) == kExitOk);
    const auto manifest = nlohmann::json::parse(read_text((out / "manifest.json").string()));
    bool seen = false;
    for (const auto& r : manifest["reports"])
        if (r["id"] == "thm11_qinf_r2") {
            seen = true;
            CHECK(r["verdict"] == "pass");
        }
    CHECK(seen);
    fs::remove_all(out);
}

TEST_CASE("repeat runs write byte-identical outputs")
{
    const fs::path a = fs::temp_directory_path() / "ndlab_det_a", b = fs::temp_directory_path() / "ndlab_det_b";
    REQUIRE(run_into("plane.ini", a) == kExitOk);
    REQUIRE(run_into("plane.ini", b) == kExitOk);
    const auto ta = read_tree(a), tb = read_tree(b);
    CHECK(ta.size() > 5);
    CHECK(ta == tb);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("malformed configuration exits 1 naming the field")
{
    ExperimentConfig cfg = load_config(kConfigDir + "/zero.ini");
    cfg.params.alpha = 1.2;
    std::ostringstream log;
    CHECK(run_experiment(cfg, ".", log) == kExitConfig);
    CHECK(log.str().find("problem.alpha") != std::string::npos);
}

TEST_CASE("a stalled linear solve exits 2")
{
    ExperimentConfig cfg = load_config(kConfigDir + "/plane.ini");
    cfg.solver.cg_tolerance = 1e-300;
    cfg.analyses.clear();
    const fs::path out = fs::temp_directory_path() / "ndlab_fail";
    ::setenv(kOutputDirEnv, out.string().c_str(), 1);
    std::ostringstream log;
    const int code = run_experiment(cfg, ".", log);
    ::unsetenv(kOutputDirEnv);
    CHECK(code == kExitNumerical);
    CHECK(log.str().find("numerical failure") != std::string::npos);
    fs::remove_all(out);
}
