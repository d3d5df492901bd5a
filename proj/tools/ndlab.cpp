#include "ndlab/checks/suite.hpp"
#include "ndlab/config.hpp"
#include "ndlab/experiment.hpp"
#include "ndlab/io.hpp"
#include "ndlab/moments.hpp"
#include "ndlab/profiles.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

#include <fmt/core.h>

#include "CLI11.hpp"

namespace {

using namespace ndlab;

int cmd_run(const std::string& path)
{
    ExperimentConfig cfg;
    try {
        cfg = load_config(path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    const auto base = std::filesystem::path(path).parent_path().string();
    return run_experiment(std::move(cfg), base.empty() ? "." : base, std::cout);
}

int cmd_selftest(const std::string& fault, std::uint64_t seed)
{
    checks::SuiteOptions opts;
    opts.seed = seed;
    if (fault == "hermite-sign") opts.fault = checks::SuiteOptions::Fault::HermiteSign;
    return checks::run_selftest(opts, std::cout);
}

int cmd_expand(const std::string& path, double K, double t, double tolerance_factor)
{
    try {
        const GridField f = read_field_csv(path);
        Warnings warnings;
        const ExpansionReport report = expand(f, K, t, {tolerance_factor}, &warnings);
        std::cout << report.serialize();
        for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

ProblemParams parse_params(const std::vector<std::string>& items)
{
    ProblemParams p;
    const std::map<std::string, double*> slots{{"m", &p.m}, {"alpha", &p.alpha}, {"lambda", &p.lambda}};
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError(item, "expected key=value");
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty()) throw ConfigError(key, fmt::format("'{}' is not a number", value));
        if (key == "dim") {
            p.dim = static_cast<int>(v);
        } else if (auto it = slots.find(key); it != slots.end()) {
            *it->second = v;
        } else {
            throw ConfigError(key, "unknown parameter (expected m, alpha, lambda, dim)");
        }
    }
    p.validate();
    return p;
}

std::string num(double v) { return std::isfinite(v) ? fmt::format("{:.17g}", v) : (std::isnan(v) ? "nan" : "inf"); }

int cmd_profile(const std::vector<std::string>& items, bool table, double t_min, double t_max, int rows)
{
    ProblemParams p;
    try {
        p = parse_params(items);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    const Regime regime = p.regime();
    std::cout << fmt::format("# m={} alpha={} lambda={} regime={}\n", num(p.m), num(p.alpha), num(p.lambda),
                             to_string(regime));
    std::cout << "# tau_star=" << (regime == Regime::FiniteHorizon ? num(tau_star(p)) : "inf") << '\n';
    if (regime == Regime::Exponential) std::cout << "# log_eta_rate=" << num(measured_log_eta_rate(p)) << '\n';
    if (regime == Regime::Algebraic) std::cout << "# eta_prefactor=" << num(fitted_eta_prefactor(p)) << '\n';
    if (!table) return kExitOk;
    try {
        std::cout << "t,zeta,sigma,eta,h\n";
        for (const auto& r : profile_table(p, t_min, t_max, rows))
            std::cout << fmt::format("{},{},{},{},{}\n", num(r.t), num(r.zeta), num(r.sigma), num(r.eta), num(r.h));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ndlab: large-time behaviour of u_t = Delta u^m + u^alpha"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "solve, renormalize and analyse one experiment");
    run->add_option("config", config_path, "experiment config (INI)")->required();

    std::string fault;
    std::uint64_t seed = 0;
    auto* selftest = app.add_subcommand("selftest", "property suite plus acceptance criteria");
    selftest->add_option("--inject-fault", fault, "deliberate defect to confirm the suite can fail")
        ->check(CLI::IsMember({"hermite-sign"}));
    selftest->add_option("--seed", seed, "seed of the randomized checks");

    std::string field_path;
    double K = 0.0, t = 0.0, tol = 1e-7;
    auto* exp = app.add_subcommand("expand", "moment expansion of a field CSV");
    exp->add_option("field", field_path, "CSV with columns x,value or x,y,value")->required();
    exp->add_option("--K", K, "expansion order")->required();
    exp->add_option("--t", t, "kernel time")->required();
    exp->add_option("--tolerance", tol, "residual tolerance factor");

    std::vector<std::string> params;
    bool table = false;
    double t_min = 1e-2, t_max = 1e4;
    int rows = 25;
    auto* prof = app.add_subcommand("profile", "scalar profiles zeta, sigma, eta, h and tau*");
    prof->add_option("params", params, "m=<v> alpha=<v> [lambda=<v>] [dim=<v>]")->required();
    prof->add_flag("--table", table, "emit a CSV table over log-spaced t");
    prof->add_option("--t-min", t_min, "first table time");
    prof->add_option("--t-max", t_max, "last table time");
    prof->add_option("--rows", rows, "table rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ndlab::kExitOk : ndlab::kExitConfig;
    }

    if (*run) return cmd_run(config_path);
    if (*selftest) return cmd_selftest(fault, seed);
    if (*exp) return cmd_expand(field_path, K, t, tol);
    return cmd_profile(params, table, t_min, t_max, rows);
}
