#include "ndlab/checks/oracles.hpp"
#include "ndlab/checks/suite.hpp"

#include "ndlab/gauss.hpp"
#include "ndlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <random>

#include <fmt/core.h>

namespace ndlab::checks {

namespace {

using Clock = std::chrono::steady_clock;
using Series = std::vector<std::pair<double, double>>;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void verdict(CheckResult& r, bool ok, std::string detail)
{
    r.passed = ok;
    r.detail = std::move(detail);
}

std::string pf(bool ok) { return ok ? "ok" : "FAIL"; }

// One solved trajectory shared by several criteria.
struct Run {
    std::string name;
    ProblemParams params;
    SolverConfig config;
    InitialPerturbation phi;
    Trajectory traj;
    double seconds = 0.0;
    std::string failure;   ///< non-empty when the solve threw
};

using RunPtr = std::shared_ptr<Run>;

RunPtr solve(std::string name, ProblemParams p, InitialPerturbation phi, SolverConfig c)
{
    auto run = std::make_shared<Run>();
    run->name = std::move(name);
    run->params = p;
    run->config = std::move(c);
    run->phi = std::move(phi);
    const auto t0 = Clock::now();
    try {
        run->traj = solve_original(p, run->phi, run->config);
    } catch (const StepFailure& e) {
        run->failure = fmt::format("step failure at t={:.6g}: {}", e.time(), e.what());
    } catch (const std::exception& e) {
        run->failure = e.what();
    }
    run->seconds = seconds_since(t0);
    return run;
}

Series ode_errors_in_t(const Run& run)
{
    Series s;
    for (std::size_t k = 1; k < run.traj.times.size(); ++k)
        s.emplace_back(run.traj.times[k], ode_convergence_error(run.params, run.traj.fields[k], run.traj.times[k]));
    return s;
}

// ------------------------------------------------------------- criterion 1

struct LinearRuns {
    RunPtr coarse, fine;
};

LinearRuns linear_runs()
{
    const ProblemParams p{1.0, 0.0, 1.0, 1};
    const auto phi = InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.5);
    auto cfg = [](int n, double dt) {
        SolverConfig c;
        c.grid = {1, 40.0, n};
        c.stepper = Stepper::Fixed;
        c.dt_initial = dt;
        c.snapshot_times = {1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
        return c;
    };
    return {solve("linear n=2048", p, phi, cfg(2048, 1e-3)), solve("linear n=4096", p, phi, cfg(4096, 5e-4))};
}

double worst_linear_error(const Run& run)
{
    // 0.5 exp(-x^2) under the heat flow: 0.5 (1+4t)^(-1/2) exp(-x^2/(1+4t))
    double worst = 0.0;
    for (std::size_t k = 1; k < run.traj.times.size(); ++k) {
        const double t = run.traj.times[k];
        const GridField U = renormalize(run.params, run.traj.fields[k], t);
        const GridField exact = GridField::sample(U.spec, [t](std::span<const double> x) {
            return 0.5 / std::sqrt(1.0 + 4.0 * t) * std::exp(-x[0] * x[0] / (1.0 + 4.0 * t));
        });
        worst = std::max(worst, lq_norm(U - exact, kInf));
    }
    return worst;
}

CheckResult criterion1(const LinearRuns& runs)
{
    CheckResult r;
    r.id = "criterion 1";
    r.description = "linear case m=1, alpha=0 against the exact heat flow, with refinement";
    const auto t0 = Clock::now();
    r.seconds = runs.coarse->seconds + runs.fine->seconds;
    if (!runs.coarse->failure.empty() || !runs.fine->failure.empty()) {
        verdict(r, false, runs.coarse->failure + " " + runs.fine->failure);
        return r;
    }
    const double e1 = worst_linear_error(*runs.coarse), e2 = worst_linear_error(*runs.fine);
    r.seconds += seconds_since(t0);
    const bool ok = e1 <= 1e-3 && e2 <= 2.5e-4 && r.seconds <= 60.0;
    verdict(r, ok, fmt::format("max err {:.3e} (<= 1e-3), refined {:.3e} (<= 2.5e-4), {:.1f}s (<= 60s)", e1, e2,
                               r.seconds));
    return r;
}

// ------------------------------------------------------------- criterion 2

ProblemParams draw(int regime, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ProblemParams p;
    p.lambda = 0.5 + 1.5 * u(rng);
    switch (regime) {
    case 0:
        p.alpha = -1.0 + 1.9 * u(rng);
        p.m = std::max(0.1, p.alpha) + 0.1 + 2.9 * u(rng);
        break;
    case 1:
        p.alpha = 0.1 + 0.8 * u(rng);
        p.m = p.alpha;
        break;
    default:
        p.alpha = 0.2 + 0.7 * u(rng);
        p.m = 0.1 + (p.alpha - 0.15) * u(rng);
        break;
    }
    return p;
}

CheckResult criterion2(const SuiteOptions& opts)
{
    return timed_check("criterion 2", "profile identities over 50 random parameter draws per regime",
                       [&](CheckResult& r) {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(opts.seed);
        double ode = 0.0, quad = 0.0, ts = 0.0, st = 0.0, kappa_ratio = 0.0;
        int over = 0;
        std::string worst_ts;
        for (int regime = 0; regime < 3; ++regime)
            for (int d = 0; d < 50; ++d) {
                const ProblemParams p = draw(regime, rng);
                for (double t : {0.1, 1.0, 10.0, 100.0}) {
                    const double z = zeta(p, p.lambda, t);
                    const double dz = oracle::fd_first([&](double s) { return zeta(p, p.lambda, s); }, t, 1e-3 * t);
                    ode = std::max(ode, std::abs(dz - std::pow(z, p.alpha)) / std::pow(z, p.alpha));
                    const double s = sigma(p, t);
                    quad = std::max(quad, std::abs(s - oracle::sigma_quadrature(p.m, p.alpha, p.lambda, t)) / s);
                    const double e_ts = std::abs(time_of_tau(p, s) - t) / t;
                    // condition number of t -> sigma inversion: sigma / (t sigma'(t))
                    const double kappa = s / (t * p.m * std::pow(z, p.m - 1.0));
                    kappa_ratio = std::max(kappa_ratio, e_ts / (kappa * 0x1p-52));
                    over += e_ts >= 1e-12 ? 1 : 0;
                    if (e_ts > ts) {
                        ts = e_ts;
                        worst_ts = fmt::format("m={:.3f} alpha={:.3f} t={}", p.m, p.alpha, t);
                    }
                    st = std::max(st, std::abs(sigma(p, time_of_tau(p, s)) - s) / s);
                }
            }
        const double secs = seconds_since(t0);
        const bool ok = ode < 1e-10 && quad < 1e-8 && ts < 1e-12 && st < 1e-12 && secs <= 5.0;
        verdict(r, ok,
                fmt::format("{:.1f}s (<= 5s); ode residual {:.2e} (<1e-10) {}, sigma vs quadrature {:.2e} (<1e-8) {}, "
                            "t(sigma(t)) {:.2e} (<1e-12) {} [worst {}; {} of 600 samples over; "
                            "max err / (cond * eps) {:.2f}], sigma(t(sigma)) {:.2e} (<1e-12) {}",
                            secs, ode, pf(ode < 1e-10), quad, pf(quad < 1e-8), ts, pf(ts < 1e-12), worst_ts, over,
                            kappa_ratio, st, pf(st < 1e-12)));
    });
}

// ------------------------------------------------------------- criterion 3

CheckResult criterion3(const SuiteOptions& opts)
{
    return timed_check("criterion 3", "residual moments vanish for 20 random Gaussian mixtures", [&](CheckResult& r) {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(opts.seed + 3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        std::string where;
        for (int mix = 0; mix < 20; ++mix) {
            const int dim = mix % 2 == 0 ? 1 : 2;
            const GridSpec spec = dim == 1 ? GridSpec{1, 60.0, 2400} : GridSpec{2, 40.0, 320};
            const int comps = 1 + static_cast<int>(u(rng) * 3.0);
            GridField f(spec);
            for (int c = 0; c < comps; ++c) {
                const Point center{-2.0 + 4.0 * u(rng), dim == 2 ? -2.0 + 4.0 * u(rng) : 0.0};
                const double width = 0.5 + u(rng), amp = -1.0 + 2.0 * u(rng);
                f += InitialPerturbation::gaussian(center, width, amp).sample(spec);
            }
            for (double K : {0.0, 1.0, 2.0, 3.0})
                for (double t : {0.0, 1.0, 10.0}) {
                    const ExpansionReport e = expand(f, K, t);
                    const GridField residual = f - expansion_field(spec, e.coefficients, t);
                    const double scale = weighted_norm(f, K);
                    for (const auto& omega : enumerate_graded(dim, integer_order(K))) {
                        const double ratio = std::abs(raw_moment(residual, omega)) / scale;
                        if (ratio > worst) {
                            worst = ratio;
                            where = fmt::format("mixture {} K={} t={} omega={}", mix, K, t, omega.to_string());
                        }
                    }
                }
        }
        const double secs = seconds_since(t0);
        verdict(r, worst < 1e-7 && secs <= 30.0,
                fmt::format("max |residual moment| / |||f|||_K = {:.2e} (<1e-7) at {}; {:.1f}s (<= 30s)", worst, where,
                            secs));
    });
}

// ------------------------------------------------------------- criterion 4

CheckResult criterion4()
{
    return timed_check("criterion 4", "heat flow of a shifted Gaussian against its moment expansion", [](CheckResult& r) {
        const auto t0 = Clock::now();
        // phi = G(x - 0.7, 1)
        const GridSpec spec{1, 400.0, 6400};
        const GridField phi =
            InitialPerturbation::gaussian({0.7, 0.0}, 2.0, 1.0 / std::sqrt(4.0 * std::numbers::pi)).sample(spec);
        const std::vector<double> times = log_spaced(100.0, 1000.0, 15);
        std::vector<GridField> flows;
        for (double t : times) flows.push_back(heat_semigroup(phi, t));
        bool all = true;
        std::string detail;
        for (int K : {0, 1, 2})
            for (double q : {1.0, kInf}) {
                Series raw, comp;
                for (std::size_t k = 0; k < times.size(); ++k) {
                    const double t = times[k];
                    const ExpansionReport e = expand(flows[k], K, t);
                    const double err = lq_norm(flows[k] - expansion_field(spec, e.coefficients, t), q);
                    const double expo = 0.5 * K + 0.5 * (std::isinf(q) ? 1.0 : 1.0 - 1.0 / q);
                    raw.emplace_back(t, err);
                    comp.emplace_back(t, std::pow(t, expo) * err);
                }
                const double target = -0.5 * K - 0.5 * (std::isinf(q) ? 1.0 : 1.0 - 1.0 / q);
                const double slope = fit_rate(raw, 1.0).slope;
                const bool dec = decreasing_over(comp, 1.0);
                const bool ok = dec && std::abs(slope - target) <= 0.15;
                all = all && ok;
                detail += fmt::format("K={} q={}: slope {:.3f} vs {:.2f}+-0.15, decreasing {} {}; ", K,
                                      std::isinf(q) ? "inf" : "1", slope, target, dec, pf(ok));
            }
        const double secs = seconds_since(t0);
        verdict(r, all && secs <= 60.0, detail + fmt::format("{:.1f}s (<= 60s)", secs));
    });
}

// ------------------------------------------------------ criteria 5, 6, 8, 9

struct LargeTimeRuns {
    RunPtr slow, fast;            // bump centred at 0
    RunPtr slow_odd, fast_odd;    // bump centred at 1.5
    RunPtr horizon;
};

SolverConfig large_time_config(const ProblemParams& p)
{
    SolverConfig c;
    c.grid = {1, 300.0, 12000};
    c.cfl_safety = 0.01;
    c.dt_initial = 1e-3;
    c.snapshot_times = sigma_snapshot_times(p, 1.0, 1000.0, 10);
    return c;
}

RunPtr large_time_run(std::string name, ProblemParams p, Point center)
{
    return solve(std::move(name), p, InitialPerturbation::smooth_bump(center, 2.0, 0.3), large_time_config(p));
}

RunPtr horizon_run()
{
    const ProblemParams p{0.5, 0.75, 1.0, 1};
    SolverConfig c;
    c.grid = {1, 40.0, 2048};
    c.cfl_safety = 0.05;
    c.dt_initial = 1e-3;
    c.snapshot_times = log_spaced(1e-2, 1e6, 2);
    return solve("finite horizon", p, InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.5), c);
}

struct Thm11Outcome {
    bool ok = false;
    std::string detail;
};

Thm11Outcome thm11_outcome(const Run& run)
{
    if (!run.failure.empty()) return {false, run.name + ": " + run.failure};
    RateReport rep = thm11_series(run.params, run.traj, run.phi.sample(run.config.grid), kInf, 2.0);
    // -min(N/2r, (N/2)(1-1/r)) + 0.2 with N=1, r=2
    const double bound = -0.25 + 0.2;
    const bool ok = rep.decreasing && rep.fit.slope <= bound;
    return {ok, fmt::format("{}: slope {:.3f} (<= {:.2f}), decreasing {} {}", run.name, rep.fit.slope, bound,
                            rep.decreasing, pf(ok))};
}

CheckResult criterion5(const LargeTimeRuns& runs)
{
    CheckResult r;
    r.id = "criterion 5";
    r.description = "first-order large-time error for m=2, alpha=0.5 and m=0.8, alpha=0.2";
    const auto t0 = Clock::now();
    const Thm11Outcome a = thm11_outcome(*runs.slow), b = thm11_outcome(*runs.fast);
    const double extra = seconds_since(t0);
    const double sa = runs.slow->seconds + extra / 2, sb = runs.fast->seconds + extra / 2;
    r.seconds = sa + sb;
    const bool time_ok = sa <= 300.0 && sb <= 300.0;
    verdict(r, a.ok && b.ok && time_ok,
            fmt::format("{}; {}; runtimes {:.1f}s, {:.1f}s (<= 300s each)", a.detail, b.detail, sa, sb));
    return r;
}

struct Thm12Outcome {
    bool ok = false;
    std::string detail;
};

Thm12Outcome thm12_outcome(const Run& run, double K)
{
    if (!run.failure.empty()) return {false, run.name + ": " + run.failure};
    const ExpansionReport e = estimate_M(run.params, run.traj, K);
    bool ok = e.stabilized;
    std::string detail = fmt::format("{} K={}: ", run.name, K);
    for (const auto& [nu, v] : *e.M_constants) detail += fmt::format("M_{}={:.5f} ", nu.to_string(), v);
    detail += fmt::format("stabilized {}", e.stabilized);
    for (double q : {1.0, kInf}) {
        const RateReport rep = thm12_series(run.params, run.traj, e, q, K);
        ok = ok && rep.decreasing;
        detail += fmt::format(", q={} decreasing {} (slope {:.3f})", std::isinf(q) ? "inf" : "1", rep.decreasing,
                              rep.fit.slope);
    }
    return {ok, detail + " " + pf(ok)};
}

CheckResult criterion6(const LargeTimeRuns& runs)
{
    CheckResult r;
    r.id = "criterion 6";
    r.description = "higher-order large-time expansion, K=0 and K=1 with an off-centre bump";
    const auto t0 = Clock::now();
    const Thm12Outcome outs[] = {thm12_outcome(*runs.slow, 0.0), thm12_outcome(*runs.fast, 0.0),
                                 thm12_outcome(*runs.slow_odd, 1.0), thm12_outcome(*runs.fast_odd, 1.0)};
    r.seconds = seconds_since(t0) + runs.slow->seconds + runs.fast->seconds + runs.slow_odd->seconds +
                runs.fast_odd->seconds;
    bool ok = r.seconds <= 600.0;
    std::string detail;
    for (const auto& o : outs) {
        ok = ok && o.ok;
        detail += o.detail + "; ";
    }
    verdict(r, ok, detail + fmt::format("runtime {:.1f}s (<= 600s)", r.seconds));
    return r;
}

CheckResult criterion7(const LargeTimeRuns& runs)
{
    CheckResult r;
    r.id = "criterion 7";
    r.description = "finite horizon m=0.5, alpha=0.75: sigma saturates at tau* and U converges";
    const Run& run = *runs.horizon;
    r.seconds = run.seconds;
    if (!run.failure.empty()) {
        verdict(r, false, run.failure);
        return r;
    }
    const auto t0 = Clock::now();
    const double t_final = run.traj.times.back();
    const double gap = std::abs(sigma(run.params, t_final) - tau_star(run.params));
    auto index_of = [&](double t) {
        const auto it = std::find_if(run.traj.times.begin(), run.traj.times.end(),
                                     [t](double s) { return std::abs(s - t) <= 1e-9 * t; });
        return static_cast<std::size_t>(it - run.traj.times.begin());
    };
    const std::size_t i5 = index_of(1e5), i6 = index_of(1e6);
    double cauchy = kInf;
    if (i5 < run.traj.times.size() && i6 < run.traj.times.size())
        cauchy = lq_norm(renormalize(run.params, run.traj.fields[i6], 1e6) -
                             renormalize(run.params, run.traj.fields[i5], 1e5),
                         kInf);
    r.seconds += seconds_since(t0);
    const bool ok = gap < 1e-2 && cauchy < 1e-3 && tau_star(run.params) == 2.0 && r.seconds <= 300.0;
    verdict(r, ok,
            fmt::format("tau* {:.15g}, |sigma(t_final)-tau*| {:.2e} (<1e-2), |U(1e6)-U(1e5)| {:.2e} (<1e-3), {:.1f}s",
                        tau_star(run.params), gap, cauchy, r.seconds));
    return r;
}

CheckResult criterion8(const LargeTimeRuns& runs)
{
    return timed_check("criterion 8", "comparison bounds and positivity at every step of the large-time runs",
                       [&](CheckResult& r) {
        bool ok = true;
        std::string detail;
        for (const RunPtr& run : {runs.slow, runs.fast, runs.slow_odd, runs.fast_odd, runs.horizon}) {
            if (!run->failure.empty()) {
                ok = false;
                detail += fmt::format("{}: {}; ", run->name, run->failure);
                continue;
            }
            const auto& st = run->traj.stats;
            const double slack = run->config.bound_slack;
            double min_u = kInf;
            for (const auto& f : run->traj.fields)
                for (double v : f.values) min_u = std::min(min_u, v);
            const bool good = st.worst_lower_margin >= -slack && st.worst_upper_margin >= -slack && min_u > 0.0;
            ok = ok && good;
            detail += fmt::format("{}: {} steps, margins {:.1e}/{:.1e}, min u {:.4f} {}; ", run->name, st.steps,
                                  st.worst_lower_margin, st.worst_upper_margin, min_u, pf(good));
        }
        verdict(r, ok, detail);
    });
}

CheckResult criterion9(const LinearRuns& lin, const LargeTimeRuns& runs)
{
    return timed_check("criterion 9", "convergence to the ODE profile in every m >= alpha run", [&](CheckResult& r) {
        bool ok = true;
        std::string detail;
        for (const RunPtr& run : {lin.coarse, lin.fine, runs.slow, runs.fast, runs.slow_odd, runs.fast_odd}) {
            if (!run->failure.empty()) {
                ok = false;
                detail += fmt::format("{}: {}; ", run->name, run->failure);
                continue;
            }
            const Series s = ode_errors_in_t(*run);
            const bool dec = decreasing_over(s, 1.0);
            const double last = s.back().second;
            const bool good = dec && last < 5e-2;
            ok = ok && good;
            detail += fmt::format("{}: final {:.2e}, decreasing {} {}; ", run->name, last, dec, pf(good));
        }
        verdict(r, ok, detail);
    });
}

} // namespace

std::vector<CheckResult> acceptance_suite(const SuiteOptions& opts)
{
    std::vector<CheckResult> out;
    const LinearRuns lin = linear_runs();
    out.push_back(criterion1(lin));
    out.push_back(criterion2(opts));
    out.push_back(criterion3(opts));
    out.push_back(criterion4());

    LargeTimeRuns runs;
    runs.slow = large_time_run("m=2 alpha=0.5", {2.0, 0.5, 1.0, 1}, {0.0, 0.0});
    runs.fast = large_time_run("m=0.8 alpha=0.2", {0.8, 0.2, 1.0, 1}, {0.0, 0.0});
    runs.slow_odd = large_time_run("m=2 alpha=0.5 off-centre", {2.0, 0.5, 1.0, 1}, {1.5, 0.0});
    runs.fast_odd = large_time_run("m=0.8 alpha=0.2 off-centre", {0.8, 0.2, 1.0, 1}, {1.5, 0.0});
    runs.horizon = horizon_run();
    out.push_back(criterion5(runs));
    out.push_back(criterion6(runs));
    out.push_back(criterion7(runs));
    out.push_back(criterion8(runs));
    out.push_back(criterion9(lin, runs));
    return out;
}

} // namespace ndlab::checks
