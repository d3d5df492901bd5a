#include "ndlab/profiles.hpp"

#include "ndlab/errors.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace ndlab {

namespace {

bool log_branch(const ProblemParams& p)
{
    return std::abs(p.m - p.alpha) < kBranchTolerance;
}

void require_time(double t, const char* name)
{
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError(fmt::format("{} must be finite and >= 0 (got {})", name, t));
}

// s such that eta(tau) = lambda (1 + s)^(1/(m-alpha)); s -> -1 at tau_star.
double eta_base(const ProblemParams& p, double tau)
{
    return (p.m - p.alpha) * tau / (p.m * std::pow(p.lambda, p.m - p.alpha));
}

} // namespace

std::string_view to_string(Regime r)
{
    switch (r) {
    case Regime::Algebraic: return "algebraic";
    case Regime::Exponential: return "exponential";
    case Regime::FiniteHorizon: return "finite-horizon";
    }
    return "unknown";
}

void ProblemParams::validate() const
{
    if (!(m > 0.0) || !std::isfinite(m))
        throw DomainError(fmt::format("m must be > 0 (got {})", m));
    if (!(alpha < 1.0) || !std::isfinite(alpha))
        throw DomainError(fmt::format("alpha must be < 1 (got {})", alpha));
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError(fmt::format("lambda must be > 0 (got {})", lambda));
    if (dim != 1 && dim != 2)
        throw DomainError(fmt::format("dim must be 1 or 2 (got {})", dim));
}

Regime ProblemParams::regime() const
{
    if (log_branch(*this)) return Regime::Exponential;
    return m > alpha ? Regime::Algebraic : Regime::FiniteHorizon;
}

double zeta(const ProblemParams& p, double mu, double t)
{
    if (!(p.alpha < 1.0))
        throw DomainError(fmt::format("alpha must be < 1 (got {})", p.alpha));
    if (!(mu > 0.0))
        throw DomainError(fmt::format("mu must be > 0 (got {})", mu));
    require_time(t, "t");
    const double a = 1.0 - p.alpha;
    return std::pow(std::pow(mu, a) + a * t, 1.0 / a);
}

double sigma(const ProblemParams& p, double t)
{
    p.validate();
    require_time(t, "t");
    const double a = 1.0 - p.alpha;
    const double growth = std::log1p(a * t / std::pow(p.lambda, a));
    if (log_branch(p)) return p.m / a * growth;
    const double d = p.m - p.alpha;
    return p.m / d * std::pow(p.lambda, d) * std::expm1(d / a * growth);
}

double tau_star(const ProblemParams& p)
{
    p.validate();
    if (p.regime() != Regime::FiniteHorizon)
        throw RegimeError(fmt::format(
            "tau_star diverges for m >= alpha (m={}, alpha={})", p.m, p.alpha));
    return p.m * std::pow(p.lambda, p.m - p.alpha) / (p.alpha - p.m);
}

double time_of_tau(const ProblemParams& p, double tau)
{
    p.validate();
    require_time(tau, "tau");
    const double a = 1.0 - p.alpha;
    const double scale = std::pow(p.lambda, a) / a;
    if (log_branch(p)) return scale * std::expm1(a * tau / p.m);
    if (p.regime() == Regime::FiniteHorizon && tau >= tau_star(p))
        throw OutOfRangeError(
            fmt::format("tau={} is beyond tau_star={}", tau, tau_star(p)));
    const double d = p.m - p.alpha;
    return scale * std::expm1(a / d * std::log1p(eta_base(p, tau)));
}

double log_eta(const ProblemParams& p, double tau)
{
    p.validate();
    require_time(tau, "tau");
    if (log_branch(p)) return std::log(p.lambda) + tau / p.m;
    if (p.regime() == Regime::FiniteHorizon && tau >= tau_star(p))
        throw OutOfRangeError(
            fmt::format("tau={} is beyond tau_star={}", tau, tau_star(p)));
    return std::log(p.lambda) + std::log1p(eta_base(p, tau)) / (p.m - p.alpha);
}

double eta(const ProblemParams& p, double tau)
{
    return std::exp(log_eta(p, tau));
}

double measured_log_eta_rate(const ProblemParams& p, double tau)
{
    const double t1 = tau, t2 = 2.0 * tau;
    return (log_eta(p, t2) - log_eta(p, t1)) / (t2 - t1);
}

double fitted_eta_prefactor(const ProblemParams& p, double tau)
{
    if (p.regime() != Regime::Algebraic)
        throw RegimeError("eta prefactor is only defined for m > alpha");
    return std::exp(log_eta(p, tau) - std::log(tau) / (p.m - p.alpha));
}

double h_decay(const ProblemParams& p, double tau)
{
    p.validate();
    require_time(tau, "tau");
    switch (p.regime()) {
    case Regime::Algebraic:
        return std::pow(1.0 + tau, -1.0 - (1.0 - p.alpha) / (p.m - p.alpha));
    case Regime::Exponential:
        return std::exp(-measured_log_eta_rate(p) * (1.0 - p.alpha) * tau);
    case Regime::FiniteHorizon:
        break;
    }
    throw RegimeError(
        fmt::format("h_decay is unsupported for m < alpha (m={}, alpha={})", p.m, p.alpha));
}

std::vector<ProfileRow> profile_table(const ProblemParams& p, double t_min, double t_max,
                                      int rows)
{
    p.validate();
    if (!(t_min > 0.0) || !(t_max > t_min) || rows < 2)
        throw DomainError("profile table needs 0 < t_min < t_max and rows >= 2");
    std::vector<ProfileRow> table;
    table.reserve(static_cast<std::size_t>(rows));
    const double lo = std::log10(t_min), step = (std::log10(t_max) - lo) / (rows - 1);
    for (int i = 0; i < rows; ++i) {
        ProfileRow row;
        row.t = i == 0 ? t_min : (i == rows - 1 ? t_max : std::pow(10.0, lo + step * i));
        row.zeta = zeta(p, p.lambda, row.t);
        row.sigma = sigma(p, row.t);
        row.eta = row.zeta;
        row.h = p.regime() == Regime::FiniteHorizon ? std::numeric_limits<double>::quiet_NaN()
                                                    : h_decay(p, row.sigma);
        table.push_back(row);
    }
    return table;
}

} // namespace ndlab
