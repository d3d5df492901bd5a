#include "ndlab/solver.hpp"

#include "ndlab/gauss.hpp"
#include "ndlab/kernels.hpp"
#include "ndlab/linear.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

namespace ndlab {

std::string_view to_string(Stepper s)
{
    return s == Stepper::Fixed ? "fixed" : "adaptive";
}

std::string_view to_string(VariableTag v)
{
    return v == VariableTag::Original ? "u-original" : "w-rescaled";
}

void SolverConfig::validate() const
{
    grid.validate();
    if (!(dt_initial > 0.0) || !std::isfinite(dt_initial))
        throw ConfigError("solver.dt_initial", "must be a positive number");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw ConfigError("solver.cfl_safety", "must lie in (0, 1]");
    if (!(dt_max > 0.0)) throw ConfigError("solver.dt_max", "must be positive");
    if (!(growth >= 1.0)) throw ConfigError("solver.growth", "must be >= 1");
    if (!(bound_slack >= 0.0)) throw ConfigError("solver.bound_slack", "must be >= 0");
    if (snapshot_times.empty()) throw ConfigError("solver.snapshot_times", "must not be empty");
    for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
        if (!(snapshot_times[k] > 0.0) || !std::isfinite(snapshot_times[k]))
            throw ConfigError("solver.snapshot_times", "times must be positive and finite");
        if (k > 0 && !(snapshot_times[k] > snapshot_times[k - 1]))
            throw ConfigError("solver.snapshot_times", "times must be strictly increasing");
    }
}

namespace {

/// Coefficients of the rescaled nonlinearities frozen at one tau.
struct RescaledCoefficients {
    double m;
    double alpha;
    double scale;    ///< lambda^-alpha eta^(alpha-1)
    double prefix;   ///< lambda^alpha eta^(1-m) / m

    RescaledCoefficients(const ProblemParams& p, double tau)
        : m(p.m), alpha(p.alpha)
    {
        const double le = log_eta(p, tau);
        const double ll = std::log(p.lambda);
        scale = std::exp(-p.alpha * ll + (p.alpha - 1.0) * le);
        prefix = std::exp(p.alpha * ll + (1.0 - p.m) * le) / p.m;
    }

    double ratio(double w) const
    {
        const double r = 1.0 + scale * w;
        if (!(r > 0.0))
            throw PositivityError(fmt::format("1 + lambda^-alpha eta^(alpha-1) w = {} is not positive", r));
        return r;
    }

    double A(double w) const { return m == 1.0 ? (ratio(w), 1.0) : std::pow(ratio(w), m - 1.0); }

    double F(double w) const
    {
        const double x = scale * w;
        ratio(w);
        if (alpha == 0.0) return 0.0;
        // (1+x)^alpha - 1 - alpha x without cancellation for small x
        double g;
        if (std::abs(x) < 0.05) {
            double term = alpha * x;
            g = 0.0;
            for (int k = 2; k < 40; ++k) {
                term *= (alpha - (k - 1)) / k * x;
                g += term;
                if (std::abs(term) <= 1e-18 * std::abs(g)) break;
            }
        } else {
            g = std::pow(1.0 + x, alpha) - 1.0 - alpha * x;
        }
        return prefix * g;
    }
};

constexpr double kGamma = 2.0 - std::numbers::sqrt2;

/// L v = div(D grad v) with face diffusivities averaged from nodal values
/// and zero Dirichlet ghosts.
class DiffusionOperator {
public:
    DiffusionOperator(const GridSpec& spec, double cg_tolerance)
        : dim_(spec.dim), n_(spec.points_per_axis), inv_h2_(1.0 / (spec.spacing() * spec.spacing())),
          cg_tolerance_(cg_tolerance)
    {
        const auto n = static_cast<std::size_t>(n_);
        if (dim_ == 1) {
            face_x_.resize(n + 1);
            lower_.resize(n);
            diag_.resize(n);
            upper_.resize(n);
        } else {
            face_x_.resize((n + 1) * n);
            face_y_.resize(n * (n + 1));
        }
    }

    void set_coefficients(std::span<const double> D, double ghost)
    {
        const auto n = static_cast<std::size_t>(n_);
        ++version_;
        if (dim_ == 1) {
            face_x_[0] = 0.5 * (ghost + D[0]);
            for (std::size_t i = 1; i < n; ++i) face_x_[i] = 0.5 * (D[i - 1] + D[i]);
            face_x_[n] = 0.5 * (D[n - 1] + ghost);
            return;
        }
        for (std::size_t j = 0; j < n; ++j) {
            face_x_[j] = 0.5 * (ghost + D[j]);
            face_x_[n * n + j] = 0.5 * (D[(n - 1) * n + j] + ghost);
        }
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) face_x_[i * n + j] = 0.5 * (D[(i - 1) * n + j] + D[i * n + j]);
        for (std::size_t i = 0; i < n; ++i) {
            face_y_[i * (n + 1)] = 0.5 * (ghost + D[i * n]);
            face_y_[i * (n + 1) + n] = 0.5 * (D[i * n + n - 1] + ghost);
            for (std::size_t j = 1; j < n; ++j)
                face_y_[i * (n + 1) + j] = 0.5 * (D[i * n + j - 1] + D[i * n + j]);
        }
    }

    void apply(std::span<const double> v, std::span<double> out) const
    {
        const auto n = static_cast<std::size_t>(n_);
        if (dim_ == 1) {
            for (std::size_t i = 0; i < n; ++i) {
                const double left = i > 0 ? v[i - 1] : 0.0;
                const double right = i + 1 < n ? v[i + 1] : 0.0;
                out[i] = inv_h2_ * (face_x_[i + 1] * (right - v[i]) - face_x_[i] * (v[i] - left));
            }
            return;
        }
        kernels::par::five_point_apply(v, n_, 1.0, inv_h2_, face_x_, face_y_, out);
        for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] - out[k];
    }

    /// (I - c L) x = rhs
    void solve(double c, std::span<const double> rhs, std::span<double> x, double time)
    {
        if (dim_ == 1) {
            factor_for(c).solve(rhs, x);
            return;
        }
        std::copy(rhs.begin(), rhs.end(), x.begin());
        const CgResult r = solve_five_point_cg(n_, c, inv_h2_, face_x_, face_y_, rhs, x, cg_tolerance_);
        iterations_ += r.iterations;
        if (!r.converged)
            throw StepFailure(fmt::format("conjugate gradients stalled at relative residual {:.3e} "
                                          "after {} iterations",
                                          r.relative_residual, r.iterations),
                              time);
    }

    /// One TR-BDF2 step of v' = L v.
    void trbdf2(std::vector<double>& v, double dt, double time)
    {
        const std::size_t size = v.size();
        scratch_a_.resize(size);
        scratch_b_.resize(size);
        const double c1 = 0.5 * kGamma * dt;
        apply(v, scratch_a_);
        for (std::size_t k = 0; k < size; ++k) scratch_a_[k] = v[k] + c1 * scratch_a_[k];
        solve(c1, scratch_a_, scratch_b_, time);
        const double w1 = 1.0 / (kGamma * (2.0 - kGamma));
        const double w0 = (1.0 - kGamma) * (1.0 - kGamma) / (kGamma * (2.0 - kGamma));
        for (std::size_t k = 0; k < size; ++k) scratch_a_[k] = w1 * scratch_b_[k] - w0 * v[k];
        solve((1.0 - kGamma) / (2.0 - kGamma) * dt, scratch_a_, v, time);
    }

    /// One backward-Euler step of v' = L v, result in out.
    void backward_euler(std::span<const double> v, double dt, std::vector<double>& out, double time)
    {
        out.resize(v.size());
        solve(dt, v, out, time);
    }

    long iterations() const { return iterations_; }

private:
    struct CachedFactor {
        double c = -1.0;
        long version = -1;
        TridiagonalFactor factor;
    };

    /// Factorizations of (I - c L) for the current coefficients; two slots
    /// cover the two TR-BDF2 stages of a fixed step.
    const TridiagonalFactor& factor_for(double c)
    {
        for (auto& slot : cache_)
            if (slot.c == c && slot.version == version_) return slot.factor;
        CachedFactor& slot = cache_[next_slot_];
        next_slot_ = (next_slot_ + 1) % cache_.size();
        const auto n = static_cast<std::size_t>(n_);
        const double s = c * inv_h2_;
        for (std::size_t i = 0; i < n; ++i) {
            lower_[i] = -s * face_x_[i];
            upper_[i] = -s * face_x_[i + 1];
            diag_[i] = 1.0 + s * (face_x_[i] + face_x_[i + 1]);
        }
        slot.factor.factor(lower_, diag_, upper_);
        slot.c = c;
        slot.version = version_;
        return slot.factor;
    }

    std::array<CachedFactor, 2> cache_;
    std::size_t next_slot_ = 0;
    long version_ = 0;
    int dim_;
    int n_;
    double inv_h2_;
    double cg_tolerance_;
    std::vector<double> face_x_, face_y_;
    std::vector<double> lower_, diag_, upper_;
    std::vector<double> scratch_a_, scratch_b_;
    long iterations_ = 0;
};

/// Drives the snapshot loop: free step size from the controller, clipped so
/// every snapshot time is hit exactly. Time is summed with Kahan compensation;
/// `step` receives (t, dt, t_next).
template <class Limit, class Step, class Record>
void march(const SolverConfig& cfg, Limit limit, Step step, Record record, StepStatistics& stats)
{
    double t = 0.0, carry = 0.0;
    double proposal = cfg.dt_initial;
    record(t);
    for (const double target : cfg.snapshot_times) {
        while (t < target) {
            double free = cfg.stepper == Stepper::Adaptive ? std::min(proposal, limit(t)) : cfg.dt_initial;
            free = std::min(free, cfg.dt_max);
            double dt = free;
            double next = 0.0;
            if (target - (t + dt) <= 1e-3 * dt) {
                dt = target - t;
                next = target;
                carry = 0.0;
            } else {
                const double y = dt - carry;
                next = t + y;
                carry = (next - t) - y;
            }
            step(t, dt, next);
            t = next;
            ++stats.steps;
            stats.min_dt = std::min(stats.min_dt, dt);
            stats.max_dt = std::max(stats.max_dt, dt);
            if (cfg.stepper == Stepper::Adaptive) proposal = cfg.growth * free;
        }
        record(t);
    }
}

SnapshotDiagnostics deviation_diagnostics(const GridField& stored, const GridField& deviation, double time)
{
    SnapshotDiagnostics d;
    d.time = time;
    const auto [lo, hi] = std::minmax_element(stored.values.begin(), stored.values.end());
    d.min = *lo;
    d.max = *hi;
    d.l1 = lq_norm(deviation, 1.0);
    d.l2 = lq_norm(deviation, 2.0);
    d.linf = lq_norm(deviation, kInf);
    d.grad_linf = gradient_linf(deviation);
    d.boundary_linf = boundary_max(deviation);
    return d;
}

/// `floor` is the roundoff level of the deviation field.
void flag_boundary(Trajectory& traj, const SnapshotDiagnostics& d, double threshold, double floor)
{
    if (traj.stats.boundary_flagged || d.linf == 0.0) return;
    if (d.boundary_linf > threshold * d.linf + floor) {
        traj.stats.boundary_flagged = true;
        warn(&traj.warnings, fmt::format("deviation reaches the truncation boundary at time {:.6g} "
                                         "(boundary/max = {:.3e})",
                                         d.time, d.boundary_linf / d.linf));
    }
}

struct BoundCheck {
    double lower_margin;
    double upper_margin;
};

/// ratio_min, ratio_max are min and max of u / zeta_lambda(t).
BoundCheck check_bounds(double ratio_min, double ratio_max, double low_ratio,
                        double high_ratio, double slack, double time)
{
    if (!std::isfinite(ratio_min) || !std::isfinite(ratio_max))
        throw StepFailure(fmt::format("non-finite value in the solution at time {:.17g}", time), time);
    if (!(ratio_min > 0.5 * low_ratio))
        throw StepFailure(fmt::format("floor u > zeta_c/2 violated at time {:.17g}: u/zeta_lambda = {:.17g}",
                                      time, ratio_min),
                          time);
    BoundCheck b{ratio_min / low_ratio - 1.0, 1.0 - ratio_max / high_ratio};
    if (b.lower_margin < -slack)
        throw StepFailure(fmt::format("lower comparison bound violated at time {:.17g} (relative margin {:.3e})",
                                      time, b.lower_margin),
                          time);
    if (b.upper_margin < -slack)
        throw StepFailure(fmt::format("upper comparison bound violated at time {:.17g} (relative margin {:.3e})",
                                      time, b.upper_margin),
                          time);
    return b;
}

void track(StepStatistics& stats, const BoundCheck& b)
{
    stats.worst_lower_margin = std::min(stats.worst_lower_margin, b.lower_margin);
    stats.worst_upper_margin = std::min(stats.worst_upper_margin, b.upper_margin);
}

void require_matching_dim(const ProblemParams& p, const SolverConfig& cfg)
{
    if (cfg.grid.dim != p.dim)
        throw ConfigError("grid.dim", fmt::format("grid dimension {} does not match problem dimension {}",
                                                  cfg.grid.dim, p.dim));
}

double ode_flow(double x, double alpha, double dt)
{
    if (alpha == 0.0) return x + dt;
    const double e = 1.0 - alpha;
    return std::pow(std::pow(x, e) + e * dt, 1.0 / e);
}

} // namespace

double coeff_A(const ProblemParams& p, double tau, double w)
{
    return RescaledCoefficients(p, tau).A(w);
}

double source_F(const ProblemParams& p, double tau, double w)
{
    return RescaledCoefficients(p, tau).F(w);
}

std::vector<double> flux_H(const ProblemParams& p, double tau, double w, std::span<const double> grad)
{
    const double a = coeff_A(p, tau, w) - 1.0;
    std::vector<double> out(grad.begin(), grad.end());
    for (auto& g : out) g *= a;
    return out;
}

double flux_potential(const ProblemParams& p, double tau, double w)
{
    const RescaledCoefficients c(p, tau);
    const double x = c.scale * w;
    c.ratio(w);
    if (p.m == 1.0 || x == 0.0) return 0.0;
    // ((1+x)^m - 1) / (m s) - w
    const double pm = std::expm1(p.m * std::log1p(x));
    return pm / (p.m * c.scale) - w;
}

double gradient_linf(const GridField& f)
{
    const int n = f.spec.points_per_axis;
    const double h = f.spec.spacing();
    auto diff = [&](auto at, int i) {
        if (i == 0) return (at(1) - at(0)) / h;
        if (i == n - 1) return (at(n - 1) - at(n - 2)) / h;
        return (at(i + 1) - at(i - 1)) / (2.0 * h);
    };
    double best = 0.0;
    const auto N = static_cast<std::size_t>(n);
    if (f.spec.dim == 1) {
        auto at = [&](int k) { return f.values[static_cast<std::size_t>(k)]; };
        for (int i = 0; i < n; ++i) best = std::max(best, std::abs(diff(at, i)));
        return best;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto along_x = [&](int k) { return f.values[static_cast<std::size_t>(k) * N + static_cast<std::size_t>(j)]; };
            auto along_y = [&](int k) { return f.values[static_cast<std::size_t>(i) * N + static_cast<std::size_t>(k)]; };
            const double gx = diff(along_x, i);
            const double gy = diff(along_y, j);
            best = std::max(best, std::hypot(gx, gy));
        }
    return best;
}

Trajectory solve_original(const ProblemParams& p, const InitialPerturbation& phi, const SolverConfig& cfg)
{
    p.validate();
    cfg.validate();
    require_matching_dim(p, cfg);
    phi.validate(p.lambda);

    Trajectory traj;
    traj.params = p;
    traj.tag = VariableTag::Original;
    traj.c_low = p.lambda + phi.infimum();
    traj.c_high = p.lambda + phi.supremum();

    GridField u = phi.sample(cfg.grid);
    for (auto& v : u.values) v += p.lambda;
    double b = p.lambda;   // far-field value zeta_lambda(t)

    const std::size_t size = u.size();
    DiffusionOperator L(cfg.grid, cfg.cg_tolerance);
    std::vector<double> v(size), D(size), half;
    const bool linear = p.m == 1.0;
    if (linear) {
        std::fill(D.begin(), D.end(), 1.0);
        L.set_coefficients(D, 1.0);
    }
    const double t_ode = std::pow(p.lambda, 1.0 - p.alpha) / (1.0 - p.alpha);
    const bool finite = p.regime() == Regime::FiniteHorizon;
    const double tstar = finite ? tau_star(p) : kInf;

    auto limit = [&](double t) {
        double dt = cfg.cfl_safety * (t + t_ode);
        const double s = sigma(p, t);
        const double target = s + cfg.cfl_safety * (1.0 + s);
        if (!finite || target < tstar) dt = std::min(dt, time_of_tau(p, target) - t);
        return dt;
    };

    // The far field is pinned to the closed form; nodes equal to it stay equal.
    auto flow_all = [&](double dt, double t_end) {
        const double fb = ode_flow(b, p.alpha, dt);
        const double next = zeta(p, p.lambda, t_end);
        for (auto& x : u.values) x = next + (ode_flow(x, p.alpha, dt) - fb);
        b = next;
    };

    auto ratio_extrema = [&](double t) {
        const double z = zeta(p, p.lambda, t);
        double lo = kInf, hi = -kInf;
        for (const double x : u.values) {
            if (std::isnan(x)) return std::pair{std::nan(""), std::nan("")};
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return std::pair{lo / z, hi / z};
    };

    auto check = [&](double t) {
        const auto [lo, hi] = ratio_extrema(t);
        const double z = zeta(p, p.lambda, t);
        return check_bounds(lo, hi, zeta(p, traj.c_low, t) / z, zeta(p, traj.c_high, t) / z,
                            cfg.bound_slack, t);
    };

    auto step = [&](double t, double dt, double t_next) {
        flow_all(0.5 * dt, t + 0.5 * dt);
        for (std::size_t k = 0; k < size; ++k) v[k] = u.values[k] - b;
        if (!linear) {
            for (std::size_t k = 0; k < size; ++k) D[k] = p.m * std::pow(u.values[k], p.m - 1.0);
            L.set_coefficients(D, p.m * std::pow(b, p.m - 1.0));
            L.backward_euler(v, 0.5 * dt, half, t);
            for (std::size_t k = 0; k < size; ++k) D[k] = p.m * std::pow(b + half[k], p.m - 1.0);
            L.set_coefficients(D, p.m * std::pow(b, p.m - 1.0));
        }
        L.trbdf2(v, dt, t);
        for (std::size_t k = 0; k < size; ++k) u.values[k] = b + v[k];
        flow_all(0.5 * dt, t_next);
        track(traj.stats, check(t_next));
    };

    auto record = [&](double t) {
        const auto bounds = check(t);
        const double z = zeta(p, p.lambda, t);
        const double scale = std::pow(p.lambda, p.alpha) / std::pow(z, p.alpha);
        GridField U(cfg.grid);
        for (std::size_t k = 0; k < size; ++k) U.values[k] = scale * (u.values[k] - z);
        SnapshotDiagnostics d = deviation_diagnostics(u, U, t);
        d.lower_margin = bounds.lower_margin;
        d.upper_margin = bounds.upper_margin;
        const double roundoff = 1e3 * std::numeric_limits<double>::epsilon() * scale * z;
        flag_boundary(traj, d, cfg.boundary_threshold, roundoff);
        traj.times.push_back(t);
        traj.fields.push_back(u);
        traj.diagnostics.push_back(d);
    };

    march(cfg, limit, step, record, traj.stats);
    traj.stats.linear_iterations = L.iterations();
    return traj;
}

Trajectory solve_rescaled(const ProblemParams& p, const InitialPerturbation& phi, const SolverConfig& cfg)
{
    p.validate();
    cfg.validate();
    require_matching_dim(p, cfg);
    phi.validate(p.lambda);
    if (p.regime() == Regime::FiniteHorizon)
        throw RegimeError("m < alpha: integrate in original time and renormalize (tau stays below tau*)");

    Trajectory traj;
    traj.params = p;
    traj.tag = VariableTag::Rescaled;
    traj.c_low = p.lambda + phi.infimum();
    traj.c_high = p.lambda + phi.supremum();

    GridField w = phi.sample(cfg.grid);
    const std::size_t size = w.size();
    DiffusionOperator L(cfg.grid, cfg.cg_tolerance);
    std::vector<double> A(size), half, k1(size), k2(size), k3(size), k4(size), stage(size);
    const bool linear = p.m == 1.0;
    if (linear) {
        std::fill(A.begin(), A.end(), 1.0);
        L.set_coefficients(A, 1.0);
    }
    const bool reactive = p.alpha != 0.0;

    auto limit = [&](double tau) { return cfg.cfl_safety * (1.0 + tau); };

    auto eval_F = [&](double tau, std::span<const double> x, std::vector<double>& out) {
        const RescaledCoefficients c(p, tau);
        for (std::size_t k = 0; k < size; ++k) out[k] = c.F(x[k]);
    };

    auto react = [&](double tau, double h) {
        if (!reactive) return;
        auto& x = w.values;
        eval_F(tau, x, k1);
        for (std::size_t k = 0; k < size; ++k) stage[k] = x[k] + 0.5 * h * k1[k];
        eval_F(tau + 0.5 * h, stage, k2);
        for (std::size_t k = 0; k < size; ++k) stage[k] = x[k] + 0.5 * h * k2[k];
        eval_F(tau + 0.5 * h, stage, k3);
        for (std::size_t k = 0; k < size; ++k) stage[k] = x[k] + h * k3[k];
        eval_F(tau + h, stage, k4);
        for (std::size_t k = 0; k < size; ++k) x[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    };

    auto check = [&](double tau) {
        const double t = time_of_tau(p, tau);
        const RescaledCoefficients c(p, tau);
        double lo = kInf, hi = -kInf;
        for (const double x : w.values) {
            if (std::isnan(x)) {
                lo = hi = std::nan("");
                break;
            }
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        const double z = zeta(p, p.lambda, t);
        return check_bounds(1.0 + c.scale * lo, 1.0 + c.scale * hi, zeta(p, traj.c_low, t) / z,
                            zeta(p, traj.c_high, t) / z, cfg.bound_slack, tau);
    };

    auto step = [&](double tau, double dtau, double tau_next) {
        react(tau, 0.5 * dtau);
        if (!linear) {
            const RescaledCoefficients c0(p, tau);
            for (std::size_t k = 0; k < size; ++k) A[k] = c0.A(w.values[k]);
            L.set_coefficients(A, 1.0);
            L.backward_euler(w.values, 0.5 * dtau, half, tau);
            const RescaledCoefficients cm(p, tau + 0.5 * dtau);
            for (std::size_t k = 0; k < size; ++k) A[k] = cm.A(half[k]);
            L.set_coefficients(A, 1.0);
        }
        L.trbdf2(w.values, dtau, tau);
        react(tau + 0.5 * dtau, 0.5 * dtau);
        track(traj.stats, check(tau_next));
    };

    auto record = [&](double tau) {
        const auto bounds = check(tau);
        SnapshotDiagnostics d = deviation_diagnostics(w, w, tau);
        d.lower_margin = bounds.lower_margin;
        d.upper_margin = bounds.upper_margin;
        flag_boundary(traj, d, cfg.boundary_threshold, 0.0);
        traj.times.push_back(tau);
        traj.fields.push_back(w);
        traj.diagnostics.push_back(d);
    };

    march(cfg, limit, step, record, traj.stats);
    traj.stats.linear_iterations = L.iterations();
    return traj;
}

} // namespace ndlab
