#pragma once

// Renormalization u -> U -> w, the error functionals of the large-time
// theorems, stabilized expansion constants, rate fitting and the finite
// horizon check.

#include "ndlab/moments.hpp"
#include "ndlab/solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ndlab {

/// U = lambda^alpha (u - zeta_lambda(t)) / zeta_lambda(t)^alpha
GridField renormalize(const ProblemParams& p, const GridField& u, double t);
/// u = zeta + lambda^-alpha zeta^alpha U
GridField unrenormalize(const ProblemParams& p, const GridField& U, double t);

/// U(., t(tau)) from an original-variable trajectory (or w(., tau) from a
/// rescaled one), cubic Lagrange interpolation in log time between snapshots.
GridField w_of(const ProblemParams& p, const Trajectory& traj, double tau);

/// sigma(t)^((N/2)(1/r - 1/q)) || U - e^{sigma Delta} phi ||_q
double thm11_error(const ProblemParams& p, const GridField& U, const GridField& phi, double t, double q,
                   double r);

struct Thm12Error {
    double raw = 0.0;           ///< || U - sum M_nu d^nu G(sigma) ||_q
    double compensated = 0.0;   ///< raw * sigma^((N/2)(1-1/q) + K/2)
};

/// Requires report.M_constants for every |nu| <= K.
Thm12Error thm12_error(const ProblemParams& p, const GridField& U, const ExpansionReport& report, double t,
                       double q, double K);

/// sup | u / zeta_lambda(t) - 1 |
double ode_convergence_error(const ProblemParams& p, const GridField& u, double t);

struct StabilizationOptions {
    double relative = 0.02;
    double absolute = 1e-6;
    int samples = 3;
};

/// Expansion of the last snapshot with M_nu = (-1)^|nu| m_nu / nu! attached;
/// `stabilized` is set when the last `samples` values of every m_nu agree.
ExpansionReport estimate_M(const ProblemParams& p, const Trajectory& traj, double K,
                           const StabilizationOptions& opts = {}, Warnings* warnings = nullptr);

struct RateFit {
    double slope = 0.0;
    double standard_error = 0.0;
    double intercept = 0.0;
    int points = 0;
};

/// Least-squares slope of log value vs log time over the points whose log time
/// lies in the final `window` fraction of the series' log-time span.
/// Throws DegenerateWindow with fewer than 8 points or non-positive data.
RateFit fit_rate(const std::vector<std::pair<double, double>>& series, double window);

/// Same fit over the points with time >= t_last / 10^decades.
RateFit fit_rate_decades(const std::vector<std::pair<double, double>>& series, double decades);

/// Non-increasing over the points with time >= t_last / 10^decades.
bool decreasing_over(const std::vector<std::pair<double, double>>& series, double decades);

enum class Verdict { Pass, Fail, Inconclusive };
std::string_view to_string(Verdict v);

/// Max-norm error allowed on the exact linear case.
inline constexpr double kLinearErrorBudget = 1e-3;

struct RateReport {
    std::string experiment_id;
    std::vector<double> times;    ///< original time t
    std::vector<double> sigmas;   ///< fitting clock
    std::vector<double> raw_errors;
    std::vector<double> compensated_errors;
    double predicted_exponent = 0.0;
    double slope_tolerance = 0.2;
    double window_decades = 1.0;
    RateFit fit;
    bool decreasing = false;
    /// Cleared when an input (e.g. the expansion constants) failed to
    /// stabilize; the verdict is then inconclusive.
    bool inputs_reliable = true;
    /// When positive, the verdict is max(raw_errors) <= error_budget instead of
    /// the slope test (used where the exact answer is known).
    double error_budget = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> notes;

    /// Fit the compensated series against sigma and set the verdict.
    void evaluate();

    static std::string csv_header();
    std::string csv_row() const;
    std::string text_block() const;
    /// Two columns: log sigma, log compensated error.
    std::string plot_data() const;
    /// Columns t, sigma, raw_error, compensated_error.
    std::string series_csv() const;
};

/// Compensated first-order error at every positive snapshot of an
/// original-variable trajectory. For m = 1, alpha = 0 the heat flow is the
/// exact answer and the report is judged against kLinearErrorBudget.
RateReport thm11_series(const ProblemParams& p, const Trajectory& traj, const GridField& phi, double q,
                        double r, std::string id = "thm11");

RateReport thm12_series(const ProblemParams& p, const Trajectory& traj, const ExpansionReport& report,
                        double q, double K, std::string id = "thm12");

/// ode_convergence_error at every positive snapshot (compensated = raw,
/// predicted exponent 0).
RateReport ode_series(const ProblemParams& p, const Trajectory& traj, std::string id = "ode_limit");

struct FiniteHorizonResult {
    double tau_star_measured = 0.0;   ///< sigma(t_final)
    double tau_star_exact = 0.0;
    GridField limit_profile;          ///< U at the final snapshot
    std::vector<double> times;        ///< snapshot times from the second one on
    std::vector<double> cauchy;       ///< || U(t_k) - U(t_{k-1}) ||_inf
};

FiniteHorizonResult finite_horizon_check(const ProblemParams& p, const Trajectory& traj);

/// Snapshot times t(tau) for tau log-spaced with `per_decade` points per
/// decade from tau_min to tau_max (inclusive).
std::vector<double> sigma_snapshot_times(const ProblemParams& p, double tau_min, double tau_max,
                                         int per_decade);

/// Log-spaced times from t_min to t_max inclusive.
std::vector<double> log_spaced(double t_min, double t_max, int per_decade);

} // namespace ndlab
