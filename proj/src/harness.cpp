#include "ndlab/harness.hpp"

#include "ndlab/gauss.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace ndlab {

GridField renormalize(const ProblemParams& p, const GridField& u, double t)
{
    const double z = zeta(p, p.lambda, t);
    const double scale = std::pow(p.lambda / z, p.alpha);
    GridField U(u.spec);
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!(u.values[k] > 0.0))
            throw PositivityError(fmt::format("renormalize: u = {} at node {} is not positive", u.values[k], k));
        U.values[k] = scale * (u.values[k] - z);
    }
    return U;
}

GridField unrenormalize(const ProblemParams& p, const GridField& U, double t)
{
    const double z = zeta(p, p.lambda, t);
    const double scale = std::pow(z / p.lambda, p.alpha);
    GridField u(U.spec);
    for (std::size_t k = 0; k < U.size(); ++k) u.values[k] = z + scale * U.values[k];
    return u;
}

namespace {

struct SnapshotView {
    double t;
    double sigma;
    GridField U;
};

SnapshotView snapshot(const ProblemParams& p, const Trajectory& traj, std::size_t k)
{
    if (traj.tag == VariableTag::Original) {
        const double t = traj.times[k];
        return {t, sigma(p, t), renormalize(p, traj.fields[k], t)};
    }
    const double tau = traj.times[k];
    return {time_of_tau(p, tau), tau, traj.fields[k]};
}

double inv(double q) { return std::isinf(q) ? 0.0 : 1.0 / q; }

std::vector<std::pair<double, double>> window_points(const std::vector<std::pair<double, double>>& series,
                                                     double t_min)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& pt : series)
        if (pt.first >= t_min * (1.0 - 1e-12)) out.push_back(pt);
    return out;
}

RateFit least_squares(const std::vector<std::pair<double, double>>& pts)
{
    if (pts.size() < 8)
        throw DegenerateWindow(fmt::format("rate fit needs at least 8 points in the window (got {})", pts.size()));
    double sx = 0.0, sy = 0.0;
    for (const auto& [t, v] : pts) {
        if (!(t > 0.0) || !(v > 0.0))
            throw DegenerateWindow(fmt::format("rate fit needs positive data (t = {}, value = {})", t, v));
        sx += std::log(t);
        sy += std::log(v);
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [t, v] : pts) {
        const double dx = std::log(t) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(v) - my);
    }
    if (!(sxx > 0.0)) throw DegenerateWindow("rate fit window has a single distinct time");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (const auto& [t, v] : pts) {
        const double r = std::log(v) - (fit.intercept + fit.slope * std::log(t));
        ss += r * r;
    }
    fit.standard_error = std::sqrt(ss / (n - 2.0) / sxx);
    fit.points = static_cast<int>(pts.size());
    return fit;
}

} // namespace

GridField w_of(const ProblemParams& p, const Trajectory& traj, double tau)
{
    if (traj.times.empty()) throw OutOfRangeError("w_of: empty trajectory");
    if (!(tau >= 0.0)) throw OutOfRangeError(fmt::format("w_of: tau = {} is negative", tau));
    const bool original = traj.tag == VariableTag::Original;
    const double x = original ? time_of_tau(p, tau) : tau;
    const auto& T = traj.times;
    if (x > T.back() * (1.0 + 1e-12) || x < T.front())
        throw OutOfRangeError(fmt::format("w_of: time {} outside the trajectory [{}, {}]", x, T.front(), T.back()));

    auto value = [&](std::size_t k) { return original ? renormalize(p, traj.fields[k], T[k]) : traj.fields[k]; };
    for (std::size_t k = 0; k < T.size(); ++k)
        if (std::abs(x - T[k]) <= 1e-12 * std::max(1.0, std::abs(x))) return value(k);

    const auto upper = static_cast<std::size_t>(std::upper_bound(T.begin(), T.end(), x) - T.begin());
    const std::size_t count = std::min<std::size_t>(4, T.size());
    std::size_t start = upper >= 2 ? upper - 2 : 0;
    start = std::min(start, T.size() - count);

    bool use_log = true;
    for (std::size_t k = start; k < start + count; ++k)
        if (!(T[k] > 0.0)) use_log = false;
    auto coord = [&](double s) { return use_log ? std::log(s) : s; };

    GridField out(traj.fields.front().spec);
    for (std::size_t k = start; k < start + count; ++k) {
        double weight = 1.0;
        for (std::size_t j = start; j < start + count; ++j)
            if (j != k) weight *= (coord(x) - coord(T[j])) / (coord(T[k]) - coord(T[j]));
        out += weight * value(k);
    }
    return out;
}

double thm11_error(const ProblemParams& p, const GridField& U, const GridField& phi, double t, double q, double r)
{
    if (!(r > 1.0) || !(q >= r)) throw DomainError(fmt::format("thm11 needs q >= r > 1 (got q={}, r={})", q, r));
    const double s = sigma(p, t);
    const GridField heat = heat_semigroup(phi, s);
    const double pref = std::pow(s, 0.5 * p.dim * (1.0 / r - inv(q)));
    return pref * lq_norm(U - heat, q);
}

Thm12Error thm12_error(const ProblemParams& p, const GridField& U, const ExpansionReport& report, double t,
                       double q, double K)
{
    if (!report.M_constants) throw DomainError("thm12 needs a report with M constants");
    const double s = sigma(p, t);
    GridField profile(U.spec);
    for (const auto& nu : enumerate_graded(U.spec.dim, integer_order(K))) {
        const auto it = report.M_constants->find(nu);
        if (it == report.M_constants->end())
            throw DomainError(fmt::format("thm12: M constant for {} missing", nu.to_string()));
        if (it->second != 0.0) profile += it->second * gauss_deriv_field(U.spec, nu, s);
    }
    Thm12Error e;
    e.raw = lq_norm(U - profile, q);
    e.compensated = e.raw * std::pow(s, 0.5 * p.dim * (1.0 - inv(q)) + 0.5 * K);
    return e;
}

double ode_convergence_error(const ProblemParams& p, const GridField& u, double t)
{
    const double z = zeta(p, p.lambda, t);
    double worst = 0.0;
    for (const double v : u.values) worst = std::max(worst, std::abs(v / z - 1.0));
    return worst;
}

ExpansionReport estimate_M(const ProblemParams& p, const Trajectory& traj, double K,
                           const StabilizationOptions& opts, Warnings* warnings)
{
    std::vector<std::size_t> usable;
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        if (traj.times[k] > 0.0) usable.push_back(k);
    if (usable.empty()) throw DomainError("estimate_M: trajectory has no positive-time snapshot");

    const SnapshotView last = snapshot(p, traj, usable.back());
    ExpansionReport report = expand(last.U, K, last.sigma, {}, warnings);

    const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(opts.samples), usable.size());
    std::vector<IndexMap> history;
    for (std::size_t k = usable.size() - count; k < usable.size(); ++k) {
        const SnapshotView v = snapshot(p, traj, usable[k]);
        MomentSolver solver(v.U, v.sigma);
        IndexMap row;
        for (const auto& [nu, c] : report.coefficients) row.emplace(nu, solver.coefficient(nu));
        history.push_back(std::move(row));
    }

    report.stabilized = count == static_cast<std::size_t>(opts.samples);
    if (!report.stabilized) report.notes.push_back("too few snapshots to certify stabilization");
    report.M_constants.emplace();
    for (const auto& [nu, c] : report.coefficients) {
        double lo = kInf, hi = -kInf, big = 0.0;
        for (const auto& row : history) {
            const double v = row.at(nu);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            big = std::max(big, std::abs(v));
        }
        const double spread = hi - lo;
        if (!(spread <= opts.relative * big || spread <= opts.absolute)) {
            report.stabilized = false;
            report.notes.push_back(fmt::format("m_{} not stabilized (spread {:.3e} over last {} samples)",
                                               nu.to_string(), spread, count));
        }
        const double sign = nu.order() % 2 == 0 ? 1.0 : -1.0;
        (*report.M_constants)[nu] = sign * c / nu.factorial();
    }
    if (!report.stabilized) warn(warnings, "estimate_M: expansion constants did not stabilize");
    return report;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& series, double window)
{
    if (series.empty()) throw DegenerateWindow("rate fit on an empty series");
    if (!(window > 0.0 && window <= 1.0)) throw DegenerateWindow("rate fit window must lie in (0, 1]");
    double lo = kInf, hi = -kInf;
    for (const auto& pt : series) {
        if (!(pt.first > 0.0)) throw DegenerateWindow("rate fit needs positive times");
        lo = std::min(lo, std::log(pt.first));
        hi = std::max(hi, std::log(pt.first));
    }
    return least_squares(window_points(series, std::exp(hi - window * (hi - lo))));
}

RateFit fit_rate_decades(const std::vector<std::pair<double, double>>& series, double decades)
{
    if (series.empty()) throw DegenerateWindow("rate fit on an empty series");
    return least_squares(window_points(series, series.back().first / std::pow(10.0, decades)));
}

bool decreasing_over(const std::vector<std::pair<double, double>>& series, double decades)
{
    if (series.empty()) return false;
    const auto pts = window_points(series, series.back().first / std::pow(10.0, decades));
    if (pts.size() < 2) return false;
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (!(pts[k].second <= pts[k - 1].second)) return false;
    return true;
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

void RateReport::evaluate()
{
    std::vector<std::pair<double, double>> series;
    for (std::size_t k = 0; k < sigmas.size(); ++k) series.emplace_back(sigmas[k], compensated_errors[k]);
    decreasing = decreasing_over(series, window_decades);
    const bool all_zero = !series.empty() && std::all_of(series.begin(), series.end(),
                                                         [](const auto& pt) { return pt.second == 0.0; });
    if (all_zero) {
        fit = {};
        notes.push_back("error identically zero");
        verdict = Verdict::Pass;
        return;
    }
    if (error_budget > 0.0) {
        const double worst = *std::max_element(raw_errors.begin(), raw_errors.end());
        notes.push_back(fmt::format("exact case: max raw error {:.3e} against budget {:.3e}", worst, error_budget));
        try {
            fit = fit_rate_decades(series, window_decades);
        } catch (const DegenerateWindow&) {
            fit = {};
        }
        verdict = worst <= error_budget ? Verdict::Pass : Verdict::Fail;
        return;
    }
    try {
        fit = fit_rate_decades(series, window_decades);
    } catch (const DegenerateWindow& e) {
        notes.push_back(e.what());
        verdict = Verdict::Inconclusive;
        return;
    }
    if (!inputs_reliable) {
        verdict = Verdict::Inconclusive;
        return;
    }
    verdict = fit.slope <= predicted_exponent + slope_tolerance && decreasing ? Verdict::Pass : Verdict::Fail;
}

std::string RateReport::csv_header()
{
    return "experiment_id,predicted_exponent,slope_tolerance,fitted_slope,slope_stderr,points,decreasing,verdict";
}

std::string RateReport::csv_row() const
{
    return fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{}", experiment_id, predicted_exponent,
                       slope_tolerance, fit.slope, fit.standard_error, fit.points, decreasing ? 1 : 0,
                       to_string(verdict));
}

std::string RateReport::text_block() const
{
    std::string out = fmt::format("[{}]\n", experiment_id);
    out += fmt::format("  snapshots          {}\n", sigmas.size());
    out += fmt::format("  window (decades)   {:g}\n", window_decades);
    out += fmt::format("  predicted exponent {:.6g} (+ {:.3g})\n", predicted_exponent, slope_tolerance);
    out += fmt::format("  fitted slope       {:.6g} +/- {:.3g} over {} points\n", fit.slope, fit.standard_error,
                       fit.points);
    out += fmt::format("  decreasing         {}\n", decreasing ? "yes" : "no");
    if (!compensated_errors.empty())
        out += fmt::format("  final error        {:.6e} at sigma {:.6g}\n", compensated_errors.back(), sigmas.back());
    out += fmt::format("  verdict            {}\n", to_string(verdict));
    for (const auto& n : notes) out += fmt::format("  note: {}\n", n);
    return out;
}

std::string RateReport::plot_data() const
{
    std::string out = "# log_sigma log_error\n";
    for (std::size_t k = 0; k < sigmas.size(); ++k)
        if (sigmas[k] > 0.0 && compensated_errors[k] > 0.0)
            out += fmt::format("{:.17g} {:.17g}\n", std::log(sigmas[k]), std::log(compensated_errors[k]));
    return out;
}

std::string RateReport::series_csv() const
{
    std::string out = "t,sigma,raw_error,compensated_error\n";
    for (std::size_t k = 0; k < sigmas.size(); ++k)
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", times[k], sigmas[k], raw_errors[k],
                           compensated_errors[k]);
    return out;
}

RateReport thm11_series(const ProblemParams& p, const Trajectory& traj, const GridField& phi, double q, double r,
                        std::string id)
{
    if (!(r > 1.0) || !(q >= r)) throw DomainError(fmt::format("thm11 needs q >= r > 1 (got q={}, r={})", q, r));
    RateReport rep;
    rep.experiment_id = std::move(id);
    const double N = p.dim;
    rep.predicted_exponent = -std::min(N / (2.0 * r), 0.5 * N * (1.0 - 1.0 / r));
    if (p.m == 1.0 && p.alpha == 0.0) rep.error_budget = kLinearErrorBudget;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (!(traj.times[k] > 0.0)) continue;
        const SnapshotView v = snapshot(p, traj, k);
        const double raw = lq_norm(v.U - heat_semigroup(phi, v.sigma), q);
        rep.times.push_back(v.t);
        rep.sigmas.push_back(v.sigma);
        rep.raw_errors.push_back(raw);
        rep.compensated_errors.push_back(raw * std::pow(v.sigma, 0.5 * N * (1.0 / r - inv(q))));
    }
    rep.evaluate();
    return rep;
}

RateReport thm12_series(const ProblemParams& p, const Trajectory& traj, const ExpansionReport& report, double q,
                        double K, std::string id)
{
    RateReport rep;
    rep.experiment_id = std::move(id);
    rep.predicted_exponent = 0.0;
    rep.inputs_reliable = report.stabilized;
    if (!report.stabilized) rep.notes.push_back("expansion constants not stabilized");
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (!(traj.times[k] > 0.0)) continue;
        const SnapshotView v = snapshot(p, traj, k);
        const Thm12Error e = thm12_error(p, v.U, report, v.t, q, K);
        rep.times.push_back(v.t);
        rep.sigmas.push_back(v.sigma);
        rep.raw_errors.push_back(e.raw);
        rep.compensated_errors.push_back(e.compensated);
    }
    rep.evaluate();
    return rep;
}

RateReport ode_series(const ProblemParams& p, const Trajectory& traj, std::string id)
{
    RateReport rep;
    rep.experiment_id = std::move(id);
    rep.predicted_exponent = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (!(traj.times[k] > 0.0)) continue;
        const SnapshotView v = snapshot(p, traj, k);
        const double e = ode_convergence_error(p, unrenormalize(p, v.U, v.t), v.t);
        rep.times.push_back(v.t);
        rep.sigmas.push_back(v.sigma);
        rep.raw_errors.push_back(e);
        rep.compensated_errors.push_back(e);
    }
    rep.evaluate();
    return rep;
}

FiniteHorizonResult finite_horizon_check(const ProblemParams& p, const Trajectory& traj)
{
    if (p.regime() != Regime::FiniteHorizon) throw RegimeError("finite horizon check needs m < alpha");
    if (traj.tag != VariableTag::Original) throw DomainError("finite horizon check needs an original-time trajectory");
    if (traj.times.empty()) throw DomainError("finite horizon check on an empty trajectory");
    FiniteHorizonResult res;
    res.tau_star_exact = tau_star(p);
    res.tau_star_measured = sigma(p, traj.times.back());
    GridField previous = renormalize(p, traj.fields.front(), traj.times.front());
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
        GridField current = renormalize(p, traj.fields[k], traj.times[k]);
        res.times.push_back(traj.times[k]);
        res.cauchy.push_back(lq_norm(current - previous, kInf));
        previous = std::move(current);
    }
    res.limit_profile = std::move(previous);
    return res;
}

std::vector<double> log_spaced(double t_min, double t_max, int per_decade)
{
    if (!(t_min > 0.0) || !(t_max > t_min) || per_decade < 1)
        throw DomainError("log_spaced needs 0 < t_min < t_max and per_decade >= 1");
    const int count = std::max(1, static_cast<int>(std::lround(per_decade * std::log10(t_max / t_min))));
    std::vector<double> out;
    for (int k = 0; k <= count; ++k) out.push_back(t_min * std::pow(t_max / t_min, static_cast<double>(k) / count));
    out.back() = t_max;
    return out;
}

std::vector<double> sigma_snapshot_times(const ProblemParams& p, double tau_min, double tau_max, int per_decade)
{
    std::vector<double> out;
    for (const double tau : log_spaced(tau_min, tau_max, per_decade)) out.push_back(time_of_tau(p, tau));
    return out;
}

} // namespace ndlab
