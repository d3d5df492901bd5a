#pragma once

// Closed-form scalar time profiles of the source ODE zeta' = zeta^alpha and
// the diffusive clock sigma(t) = int_0^t m zeta_lambda(s)^(m-1) ds.

#include <string_view>
#include <vector>

namespace ndlab {

enum class Regime {
    Algebraic,     ///< m > alpha: sigma grows like a power of t
    Exponential,   ///< m = alpha: sigma grows like log t
    FiniteHorizon  ///< m < alpha: sigma saturates at tau_star
};

std::string_view to_string(Regime r);

/// |m - alpha| below this uses the logarithmic (m = alpha) branch.
inline constexpr double kBranchTolerance = 1e-6;

struct ProblemParams {
    double m = 1.0;
    double alpha = 0.0;
    double lambda = 1.0;
    int dim = 1;

    /// Throws DomainError naming the offending field.
    void validate() const;
    Regime regime() const;
};

enum class TimeAxis { Original, Rescaled };

struct ProfileValue {
    double value = 0.0;
    double time = 0.0;
    TimeAxis axis = TimeAxis::Original;
};

double zeta(const ProblemParams& p, double mu, double t);
double sigma(const ProblemParams& p, double t);
double time_of_tau(const ProblemParams& p, double tau);
double eta(const ProblemParams& p, double tau);
/// log eta(tau), finite even where eta itself would overflow.
double log_eta(const ProblemParams& p, double tau);
double h_decay(const ProblemParams& p, double tau);
double tau_star(const ProblemParams& p);

/// Asymptotic slope of log eta(tau) in tau (the constant d_m of the m = alpha
/// regime), measured from two late samples of log eta.
double measured_log_eta_rate(const ProblemParams& p, double tau = 1e3);

/// Fitted prefactor eta(tau) / tau^(1/(m-alpha)) at large tau (m > alpha only).
/// Reported as a diagnostic; nothing is asserted about its value.
double fitted_eta_prefactor(const ProblemParams& p, double tau = 1e8);

struct ProfileRow {
    double t = 0.0;
    double zeta = 0.0;
    double sigma = 0.0;
    double eta = 0.0;   ///< eta(sigma(t)) = zeta_lambda(t)
    double h = 0.0;     ///< h(sigma(t)); NaN in the finite-horizon regime
};

/// Table over log-spaced t for the `profile --table` subcommand.
std::vector<ProfileRow> profile_table(const ProblemParams& p, double t_min, double t_max,
                                      int rows);

} // namespace ndlab
