#include "ndlab/experiment.hpp"

#include "ndlab/gauss.hpp"
#include "ndlab/harness.hpp"
#include "ndlab/io.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <ostream>

#include <fmt/core.h>
#include "json.hpp"

namespace ndlab {

using nlohmann::json;

namespace {

json number(double v)
{
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

json rate_json(const RateReport& r)
{
    return {{"id", r.experiment_id},
            {"predicted_exponent", number(r.predicted_exponent)},
            {"slope_tolerance", r.slope_tolerance},
            {"fitted_slope", number(r.fit.slope)},
            {"slope_stderr", number(r.fit.standard_error)},
            {"points", r.fit.points},
            {"decreasing", r.decreasing},
            {"verdict", std::string(to_string(r.verdict))},
            {"notes", r.notes}};
}

json expansion_json(const ExpansionReport& e)
{
    json coefs = json::object(), m = json::object();
    for (const auto& [nu, v] : e.coefficients) coefs[nu.to_string()] = number(v);
    if (e.M_constants)
        for (const auto& [nu, v] : *e.M_constants) m[nu.to_string()] = number(v);
    return {{"K", e.K}, {"at_time", e.at_time}, {"valid", e.valid}, {"stabilized", e.stabilized},
            {"coefficients", coefs}, {"M", m}, {"notes", e.notes}};
}

std::string sanitize(const std::string& id)
{
    std::string out;
    for (const char c : id) out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ? c : '_';
    return out;
}

std::string inf_label(double q) { return std::isinf(q) ? "inf" : fmt::format("{:g}", q); }

} // namespace

int run_experiment(ExperimentConfig cfg, const std::string& base_dir, std::ostream& log)
{
    try {
        cfg.resolve(base_dir);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const std::filesystem::path out = resolve_output_dir(cfg.output_dir);
    const ProblemParams& p = cfg.params;
    Trajectory traj;
    try {
        traj = cfg.variable == VariableTag::Original ? solve_original(p, cfg.phi, cfg.solver)
                                                     : solve_rescaled(p, cfg.phi, cfg.solver);
    } catch (const StepFailure& e) {
        log << fmt::format("numerical failure at time {:.17g}: {}\n", e.time(), e.what());
        return kExitNumerical;
    } catch (const PositivityError& e) {
        log << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    json manifest;
    manifest["problem"] = {{"m", p.m}, {"alpha", p.alpha}, {"lambda", p.lambda}, {"dim", p.dim},
                           {"regime", std::string(to_string(p.regime()))}};
    manifest["phi"] = {{"kind", std::string(to_string(cfg.phi.kind))},
                       {"center", {cfg.phi.center[0], cfg.phi.center[1]}},
                       {"width", cfg.phi.width},
                       {"amplitude", cfg.phi.amplitude},
                       {"table", cfg.phi_table_path}};
    manifest["grid"] = {{"dim", cfg.solver.grid.dim},
                        {"half_width", cfg.solver.grid.half_width},
                        {"points_per_axis", cfg.solver.grid.points_per_axis},
                        {"spacing", cfg.solver.grid.spacing()}};
    const auto& st = traj.stats;
    manifest["scheme"] = {{"variable", std::string(to_string(traj.tag))},
                          {"stepper", std::string(to_string(cfg.solver.stepper))},
                          {"splitting", "strang: exact source flow / TR-BDF2 diffusion"},
                          {"dt_initial", cfg.solver.dt_initial},
                          {"cfl_safety", cfg.solver.cfl_safety},
                          {"dt_max", number(cfg.solver.dt_max)},
                          {"bound_slack", cfg.solver.bound_slack},
                          {"steps", st.steps},
                          {"min_dt", number(st.min_dt)},
                          {"max_dt", st.max_dt},
                          {"linear_iterations", st.linear_iterations},
                          {"worst_lower_margin", number(st.worst_lower_margin)},
                          {"worst_upper_margin", number(st.worst_upper_margin)},
                          {"boundary_flagged", st.boundary_flagged}};
    manifest["seed"] = cfg.seed;

    json snaps = json::array();
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const std::string file = fmt::format("snapshots/snap_{:04d}.csv", k);
        write_field_csv((out / file).string(), traj.fields[k]);
        const auto& d = traj.diagnostics[k];
        snaps.push_back({{"time", d.time},
                         {"file", file},
                         {"min", d.min},
                         {"max", d.max},
                         {"l1", d.l1},
                         {"l2", d.l2},
                         {"linf", d.linf},
                         {"lower_margin", d.lower_margin},
                         {"upper_margin", d.upper_margin},
                         {"grad_linf", d.grad_linf},
                         {"boundary_linf", d.boundary_linf}});
    }
    manifest["snapshots"] = snaps;

    std::string rates = RateReport::csv_header() + "\n";
    std::string texts;
    json reports = json::array(), expansions = json::array(), horizon = json::object();
    Warnings warnings = traj.warnings;
    const GridField phi_field = cfg.phi.sample(cfg.solver.grid);

    auto emit = [&](const RateReport& r) {
        rates += r.csv_row() + "\n";
        texts += r.text_block() + "\n";
        const std::string stem = sanitize(r.experiment_id);
        write_text((out / (stem + ".series.csv")).string(), r.series_csv());
        write_text((out / (stem + ".plot.dat")).string(), r.plot_data());
        reports.push_back(rate_json(r));
    };

    try {
        for (const auto& a : cfg.analyses) {
            switch (a.kind) {
            case Analysis::Kind::Thm11:
                emit(thm11_series(p, traj, phi_field, a.q, a.r,
                                  fmt::format("thm11_q{}_r{}", inf_label(a.q), inf_label(a.r))));
                break;
            case Analysis::Kind::Thm12: {
                const ExpansionReport e = estimate_M(p, traj, a.K, {}, &warnings);
                write_text((out / fmt::format("expansion_K{}.txt", inf_label(a.K))).string(), e.serialize());
                expansions.push_back(expansion_json(e));
                emit(thm12_series(p, traj, e, a.q, a.K, fmt::format("thm12_q{}_K{}", inf_label(a.q), inf_label(a.K))));
                break;
            }
            case Analysis::Kind::OdeLimit: emit(ode_series(p, traj)); break;
            case Analysis::Kind::FiniteHorizon: {
                const FiniteHorizonResult fh = finite_horizon_check(p, traj);
                write_field_csv((out / "limit_profile.csv").string(), fh.limit_profile);
                std::string series = "t,cauchy_linf\n";
                for (std::size_t k = 0; k < fh.times.size(); ++k)
                    series += fmt::format("{:.17g},{:.17g}\n", fh.times[k], fh.cauchy[k]);
                write_text((out / "finite_horizon.series.csv").string(), series);
                horizon = {{"tau_star", fh.tau_star_exact},
                           {"sigma_final", fh.tau_star_measured},
                           {"gap", std::abs(fh.tau_star_measured - fh.tau_star_exact)},
                           {"last_cauchy", fh.cauchy.empty() ? 0.0 : fh.cauchy.back()}};
                texts += fmt::format("[finite_horizon]\n  tau*          {:.9g}\n  sigma(t_end)  {:.9g}\n"
                                     "  last Cauchy   {:.6e}\n\n",
                                     fh.tau_star_exact, fh.tau_star_measured,
                                     fh.cauchy.empty() ? 0.0 : fh.cauchy.back());
                break;
            }
            case Analysis::Kind::ExpandOnly: {
                const std::size_t k = traj.times.size() - 1;
                const bool orig = traj.tag == VariableTag::Original;
                const double t = traj.times[k];
                const GridField U = orig ? renormalize(p, traj.fields[k], t) : traj.fields[k];
                const ExpansionReport e = expand(U, a.K, orig ? sigma(p, t) : t, {}, &warnings);
                write_text((out / fmt::format("expansion_only_K{}.txt", inf_label(a.K))).string(), e.serialize());
                expansions.push_back(expansion_json(e));
                break;
            }
            }
        }
    } catch (const PositivityError& e) {
        log << "numerical failure during analysis: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const RegimeError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    manifest["reports"] = reports;
    manifest["expansions"] = expansions;
    if (!horizon.empty()) manifest["finite_horizon"] = horizon;
    manifest["warnings"] = warnings;

    write_text((out / "manifest.json").string(), manifest.dump(2) + "\n");
    write_text((out / "config.ini").string(), serialize_config(cfg));
    write_text((out / "rates.csv").string(), rates);
    write_text((out / "reports.txt").string(), texts);
    log << texts;
    for (const auto& w : warnings) log << "warning: " << w << '\n';
    log << fmt::format("wrote {}\n", out.string());
    return kExitOk;
}

} // namespace ndlab
