#include "ndlab/checks/oracles.hpp"
#include "ndlab/checks/suite.hpp"

#include "ndlab/config.hpp"
#include "ndlab/gauss.hpp"
#include "ndlab/harness.hpp"
#include "ndlab/io.hpp"
#include "ndlab/kernels.hpp"
#include "ndlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/core.h>

namespace ndlab::checks {

namespace {

using DerivFn = double (*)(int, double, double);

// Hermite recurrence with the (-a)^n factor replaced by a^n.
double hermite_sign_flipped(int n, double x, double t)
{
    const double a = 1.0 / std::sqrt(4.0 * t);
    const double y = a * x;
    double h_prev = 1.0, h = n == 0 ? 1.0 : 2.0 * y;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * y * h - 2.0 * k * h_prev;
        h_prev = h;
        h = next;
    }
    return std::pow(a, n) * h * a / std::sqrt(std::numbers::pi) * std::exp(-y * y);
}

long double gauss_ld(long double x, long double t)
{
    return std::exp(-x * x / (4.0L * t)) / std::sqrt(4.0L * std::numbers::pi_v<long double> * t);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void verdict(CheckResult& r, bool ok, std::string detail)
{
    r.passed = ok;
    r.detail = std::move(detail);
}

// ---------------------------------------------------------------- profiles

CheckResult zeta_vs_rk4()
{
    return timed_check("profiles.zeta_rk4", "closed-form zeta matches RK4 integration", [](CheckResult& r) {
        double worst = 0.0;
        const ProblemParams cases[] = {{2.0, 0.5, 1.0, 1}, {0.8, 0.2, 1.5, 1}, {0.5, 0.75, 0.7, 1},
                                       {1.0, 0.0, 1.0, 1}, {1.2, -0.5, 2.0, 1}, {0.6, 0.6, 1.0, 1}};
        for (const auto& p : cases)
            for (double t : {0.5, 3.0, 10.0})
                worst = std::max(worst, rel(zeta(p, p.lambda, t), oracle::rk4_zeta(p.alpha, p.lambda, t, 1e-3)));
        verdict(r, worst < 1e-9, fmt::format("max rel err {:.2e} (tol 1e-9)", worst));
    });
}

CheckResult eta_composition()
{
    return timed_check("profiles.eta_sigma", "eta(sigma(t)) equals zeta_lambda(t)", [](CheckResult& r) {
        double worst = 0.0;
        const ProblemParams cases[] = {{2.0, 0.5, 1.0, 1}, {0.8, 0.2, 1.0, 1}, {0.5, 0.5, 1.3, 1}, {0.5, 0.75, 1.0, 1}};
        for (const auto& p : cases)
            for (double t : {0.1, 1.0, 30.0}) worst = std::max(worst, rel(eta(p, sigma(p, t)), zeta(p, p.lambda, t)));
        verdict(r, worst < 1e-11, fmt::format("max rel err {:.2e} (tol 1e-11)", worst));
    });
}

CheckResult tau_star_quadrature()
{
    return timed_check("profiles.tau_star", "tau* equals the improper sigma integral; 2.0 at (0.5, 0.75, 1)",
                       [](CheckResult& r) {
        const ProblemParams base{0.5, 0.75, 1.0, 1};
        const double exact = tau_star(base);
        double worst = 0.0;
        for (const ProblemParams& p : {base, ProblemParams{0.3, 0.9, 1.7, 1}, ProblemParams{0.2, 0.4, 0.6, 1}}) {
            const double e = 1.0 - p.alpha;
            const double q = oracle::integrate_to_infinity(
                [&](double s) { return p.m * std::pow(std::pow(std::pow(p.lambda, e) + e * s, 1.0 / e), p.m - 1.0); },
                0.0);
            worst = std::max(worst, rel(tau_star(p), q));
        }
        bool regime_error = false;
        try {
            (void)tau_star(ProblemParams{2.0, 0.5, 1.0, 1});
        } catch (const RegimeError&) {
            regime_error = true;
        }
        verdict(r, std::abs(exact - 2.0) < 1e-14 && worst < 1e-9 && regime_error,
                fmt::format("tau*={:.15g}, quadrature rel err {:.2e}, m>=alpha raises: {}", exact, worst, regime_error));
    });
}

CheckResult profile_domain_errors()
{
    return timed_check("profiles.domain", "invalid arguments raise DomainError", [](CheckResult& r) {
        int raised = 0;
        const ProblemParams p{2.0, 0.5, 1.0, 1};
        auto expect = [&](auto&& fn) {
            try {
                fn();
            } catch (const DomainError&) {
                ++raised;
            }
        };
        expect([&] { (void)zeta(p, 0.0, 1.0); });
        expect([&] { (void)zeta(p, 1.0, -1.0); });
        expect([&] { ProblemParams{2.0, 1.0, 1.0, 1}.validate(); });
        expect([&] { ProblemParams{2.0, 0.5, -1.0, 1}.validate(); });
        expect([&] { (void)time_of_tau(p, -0.5); });
        verdict(r, raised == 5, fmt::format("{}/5 raised", raised));
    });
}

// ------------------------------------------------------------------ gauss

CheckResult gauss_deriv_fd(const SuiteOptions& opts)
{
    const DerivFn deriv = opts.fault == SuiteOptions::Fault::HermiteSign ? &hermite_sign_flipped : &gauss_deriv_1d;
    return timed_check("gauss.deriv_fd", "Hermite derivatives match long-double finite differences (1-D and 2-D)",
                       [deriv](CheckResult& r) {
        double worst = 0.0;
        std::string where;
        for (double t : {0.3, 1.0, 4.0}) {
            const double s = std::sqrt(t);
            for (int n = 0; n <= 6; ++n) {
                std::vector<double> ref, got;
                for (double xs : {-2.3, -1.1, -0.4, 0.0, 0.35, 0.9, 1.7, 2.8}) {
                    const double x = xs * s;
                    ref.push_back(static_cast<double>(oracle::fd_derivative(
                        [t](long double y) { return gauss_ld(y, t); }, x, n, 0.25L * s)));
                    got.push_back(deriv(n, x, t));
                }
                double scale = 0.0;
                for (double v : ref) scale = std::max(scale, std::abs(v));
                for (std::size_t k = 0; k < ref.size(); ++k) {
                    const double e = std::abs(got[k] - ref[k]) / std::max(std::abs(ref[k]), 1e-3 * scale);
                    if (e > worst) {
                        worst = e;
                        where = fmt::format("n={} t={}", n, t);
                    }
                }
            }
        }
        // 2-D: mixed partial d^(i,j) of the product kernel vs nested 1-D differences
        double worst2 = 0.0;
        const double t = 1.5, s = std::sqrt(t);
        for (auto [i, j] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{0, 3}, std::pair{3, 2}}) {
            for (auto [x0, x1] : {std::pair{0.4, -0.7}, std::pair{-1.3, 0.2}, std::pair{1.9, 1.1}}) {
                const long double gx = oracle::fd_derivative([t](long double y) { return gauss_ld(y, t); }, x0 * s, i, 0.25L * s);
                const long double gy = oracle::fd_derivative([t](long double y) { return gauss_ld(y, t); }, x1 * s, j, 0.25L * s);
                const double ref = static_cast<double>(gx * gy);
                const double got = deriv(i, x0 * s, t) * deriv(j, x1 * s, t);
                const double mag = std::abs(deriv(0, 0.0, t) * deriv(0, 0.0, t)) / std::pow(t, 0.5 * (i + j));
                worst2 = std::max(worst2, std::abs(got - ref) / std::max(std::abs(ref), 1e-3 * mag));
            }
        }
        verdict(r, worst < 1e-7 && worst2 < 1e-7,
                fmt::format("1-D worst {:.2e} at {}, 2-D worst {:.2e} (tol 1e-7)", worst, where, worst2));
    });
}

CheckResult gauss_vs_multi()
{
    return timed_check("gauss.tensor", "gauss_deriv in 2-D is the product of 1-D derivatives", [](CheckResult& r) {
        double worst = 0.0;
        for (auto [i, j] : {std::pair{0, 0}, std::pair{1, 2}, std::pair{3, 0}}) {
            const double x[2] = {0.6, -1.4};
            const double got = gauss_deriv(MultiIndex({i, j}), x, 2.0);
            const double want = gauss_deriv_1d(i, 0.6, 2.0) * gauss_deriv_1d(j, -1.4, 2.0);
            worst = std::max(worst, rel(got, want));
            const double gk = g_kernel(MultiIndex({i, j}), x, 2.0);
            const double fact = MultiIndex({i, j}).factorial();
            const double gw = ((i + j) % 2 == 0 ? 1.0 : -1.0) / fact * gauss_deriv(MultiIndex({i, j}), x, 3.0);
            worst = std::max(worst, rel(gk, gw));
        }
        verdict(r, worst < 1e-14, fmt::format("max rel err {:.2e}", worst));
    });
}

CheckResult kernel_moments()
{
    return timed_check("gauss.moments", "grid moments of d^n G match the closed form", [](CheckResult& r) {
        const GridSpec spec{1, 40.0, 1600};
        double worst = 0.0;
        for (double t : {0.5, 2.0, 8.0})
            for (int n = 0; n <= 4; ++n) {
                const GridField f = gauss_deriv_field(spec, MultiIndex({n}), t);
                for (int l = 0; l <= 5; ++l) {
                    const double q = raw_moment(f, MultiIndex({l}));
                    const double want = oracle::gauss_deriv_moment(l, n, t);
                    worst = std::max(worst, std::abs(q - want) / std::max(1.0, std::abs(want)));
                }
            }
        verdict(r, worst < 1e-10, fmt::format("max err {:.2e} (tol 1e-10)", worst));
    });
}

CheckResult semigroup_law()
{
    return timed_check("gauss.semigroup", "e^{sD} e^{tD} = e^{(s+t)D}; Gaussians map to Gaussians", [](CheckResult& r) {
        double worst_law = 0.0, worst_map = 0.0;
        for (int dim : {1, 2}) {
            const GridSpec spec{dim, 30.0, dim == 1 ? 1200 : 160};
            const GridField phi = InitialPerturbation::gaussian({0.5, -0.3}, 1.2, 0.8).sample(spec);
            const GridField a = heat_semigroup(heat_semigroup(phi, 0.7), 1.8);
            const GridField b = heat_semigroup(phi, 2.5);
            worst_law = std::max(worst_law, lq_norm(a - b, kInf) / lq_norm(b, kInf));
            // amp exp(-r^2/w^2) -> amp (w^2/(w^2+4t))^(N/2) exp(-r^2/(w^2+4t))
            const double w2 = 1.44, t = 2.5, s2 = w2 + 4.0 * t;
            const GridField exact = GridField::sample(spec, [&](std::span<const double> x) {
                double r2 = (x[0] - 0.5) * (x[0] - 0.5);
                if (dim == 2) r2 += (x[1] + 0.3) * (x[1] + 0.3);
                return 0.8 * std::pow(w2 / s2, 0.5 * dim) * std::exp(-r2 / s2);
            });
            worst_map = std::max(worst_map, lq_norm(b - exact, kInf) / lq_norm(exact, kInf));
        }
        verdict(r, worst_law < 1e-10 && worst_map < 1e-10,
                fmt::format("law {:.2e}, closed form {:.2e} (tol 1e-10)", worst_law, worst_map));
    });
}

// ---------------------------------------------------------------- moments

CheckResult moments_recover_coefficients()
{
    return timed_check("moments.recover", "f = sum c_nu g_nu(.,t) returns m_nu = c_nu", [](CheckResult& r) {
        double worst = 0.0;
        for (int dim : {1, 2}) {
            const GridSpec spec{dim, 30.0, dim == 1 ? 1200 : 200};
            IndexMap c;
            double v = 0.7;
            for (const auto& nu : enumerate_graded(dim, 3)) {
                c[nu] = v;
                v = -0.6 * v + 0.15;
            }
            for (double t : {0.0, 2.0}) {
                const GridField f = expansion_field(spec, c, t);
                MomentSolver ms(f, t);
                for (const auto& [nu, want] : c) worst = std::max(worst, std::abs(ms.coefficient(nu) - want));
            }
        }
        verdict(r, worst < 1e-9, fmt::format("max err {:.2e} (tol 1e-9)", worst));
    });
}

CheckResult moments_permutation()
{
    return timed_check("moments.permutation", "swapping axes permutes the 2-D coefficients", [](CheckResult& r) {
        const GridSpec spec{2, 25.0, 160};
        const auto bump = [](double x, double y) {
            return std::exp(-((x - 0.8) * (x - 0.8) + 2.0 * (y + 0.3) * (y + 0.3))) +
                   0.4 * std::exp(-0.5 * ((x + 1.0) * (x + 1.0) + (y - 1.2) * (y - 1.2)));
        };
        const GridField f = GridField::sample(spec, [&](std::span<const double> x) { return bump(x[0], x[1]); });
        const GridField g = GridField::sample(spec, [&](std::span<const double> x) { return bump(x[1], x[0]); });
        MomentSolver mf(f, 1.0), mg(g, 1.0);
        double worst = 0.0;
        for (const auto& nu : enumerate_graded(2, 3)) {
            const MultiIndex swapped({nu[1], nu[0]});
            worst = std::max(worst, std::abs(mf.coefficient(nu) - mg.coefficient(swapped)));
        }
        verdict(r, worst < 1e-12, fmt::format("max diff {:.2e}", worst));
    });
}

CheckResult moments_linear()
{
    return timed_check("moments.linear", "m_nu is linear in f", [](CheckResult& r) {
        const GridSpec spec{1, 30.0, 1200};
        const GridField a = InitialPerturbation::gaussian({0.4, 0.0}, 1.0, 1.0).sample(spec);
        const GridField b = InitialPerturbation::smooth_bump({-1.0, 0.0}, 2.0, 0.5).sample(spec);
        const GridField c = 2.0 * a + (-3.0) * b;
        double worst = 0.0;
        for (int l = 0; l <= 3; ++l) {
            const MultiIndex nu({l});
            const double lhs = moment_coefficient(c, nu, 1.5);
            const double rhs = 2.0 * moment_coefficient(a, nu, 1.5) - 3.0 * moment_coefficient(b, nu, 1.5);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        verdict(r, worst < 1e-12, fmt::format("max diff {:.2e}", worst));
    });
}

CheckResult duhamel_zero()
{
    return timed_check("moments.duhamel", "R_K vanishes for f(s) = g_0(., s)", [](CheckResult& r) {
        const GridSpec spec{1, 40.0, 800};
        std::vector<TimedField> traj;
        for (int k = 0; k <= 20; ++k) {
            const double s = 0.2 * k;
            traj.push_back({s, g_kernel_field(spec, MultiIndex::zero(1), s)});
        }
        Warnings w;
        const GridField R = duhamel_remainder(traj, 0.0, 4.0, &w);
        const double scale = 4.0 * lq_norm(g_kernel_field(spec, MultiIndex::zero(1), 4.0), kInf);
        const double err = lq_norm(R, kInf) / scale;
        verdict(r, err < 1e-6, fmt::format("|R_0|/|t g_0| = {:.2e} (tol 1e-6)", err));
    });
}

CheckResult residual_zero_field()
{
    return timed_check("moments.zero", "f = 0 gives zero coefficients and a valid expansion", [](CheckResult& r) {
        const GridField f(GridSpec{2, 10.0, 40});
        const ExpansionReport e = expand(f, 2.0, 1.0);
        double worst = 0.0;
        for (const auto& [nu, v] : e.coefficients) worst = std::max(worst, std::abs(v));
        verdict(r, worst == 0.0 && e.valid, fmt::format("max |m_nu| {:.1e}, valid {}", worst, e.valid));
    });
}

// ----------------------------------------------------------------- solver

SolverConfig fixed(GridSpec g, double dt, std::vector<double> times)
{
    SolverConfig c;
    c.grid = g;
    c.stepper = Stepper::Fixed;
    c.dt_initial = dt;
    c.snapshot_times = std::move(times);
    return c;
}

CheckResult solver_zero()
{
    return timed_check("solver.zero", "phi = 0 stays on the ODE profile", [](CheckResult& r) {
        const ProblemParams p{2.0, 0.5, 1.0, 1};
        SolverConfig c;
        c.grid = {1, 20.0, 200};
        c.snapshot_times = {1.0, 10.0};
        const Trajectory tr = solve_original(p, InitialPerturbation::zero(), c);
        double worst = 0.0;
        for (std::size_t k = 0; k < tr.times.size(); ++k)
            worst = std::max(worst, lq_norm(renormalize(p, tr.fields[k], tr.times[k]), kInf));
        verdict(r, worst < 1e-12, fmt::format("max |U| {:.2e}", worst));
    });
}

CheckResult solver_refinement()
{
    return timed_check("solver.refinement", "linear case converges at second order (error ratio ~4)", [](CheckResult& r) {
        const ProblemParams p{1.0, 0.0, 1.0, 1};
        const auto phi = InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.5);
        std::vector<double> errs;
        for (auto [n, dt] : {std::pair{64, 0.02}, std::pair{128, 0.01}, std::pair{256, 0.005}}) {
            const Trajectory tr = solve_original(p, phi, fixed({1, 20.0, n}, dt, {1.0}));
            const GridField U = renormalize(p, tr.fields.back(), 1.0);
            const GridField exact = GridField::sample(U.spec, [](std::span<const double> x) {
                return 0.5 / std::sqrt(5.0) * std::exp(-x[0] * x[0] / 5.0);
            });
            errs.push_back(lq_norm(U - exact, kInf));
        }
        const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
        verdict(r, r1 > 3.0 && r1 < 5.0 && r2 > 3.0 && r2 < 5.0,
                fmt::format("errors {:.2e} {:.2e} {:.2e}, ratios {:.2f} {:.2f}", errs[0], errs[1], errs[2], r1, r2));
    });
}

CheckResult solver_rescaled_agreement()
{
    return timed_check("solver.rescaled", "rescaled solve agrees with original solve + renormalize", [](CheckResult& r) {
        const ProblemParams p{2.0, 0.5, 1.0, 1};
        const auto phi = InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.3);
        SolverConfig co, cr;
        co.grid = cr.grid = {1, 30.0, 600};
        co.cfl_safety = cr.cfl_safety = 0.01;
        const std::vector<double> taus = {1.0, 5.0};
        cr.snapshot_times = taus;
        for (double tau : taus) co.snapshot_times.push_back(time_of_tau(p, tau));
        const Trajectory a = solve_original(p, phi, co);
        const Trajectory b = solve_rescaled(p, phi, cr);
        double worst = 0.0;
        for (std::size_t k = 1; k < a.times.size(); ++k) {
            const GridField U = renormalize(p, a.fields[k], a.times[k]);
            worst = std::max(worst, lq_norm(U - b.fields[k], kInf) / lq_norm(U, kInf));
        }
        bool refused = false;
        try {
            (void)solve_rescaled(ProblemParams{0.5, 0.75, 1.0, 1}, phi, cr);
        } catch (const RegimeError&) {
            refused = true;
        }
        verdict(r, worst < 1e-5 && refused,
                fmt::format("max rel diff {:.2e} (tol 1e-5), m<alpha refused: {}", worst, refused));
    });
}

CheckResult solver_sign_and_symmetry()
{
    return timed_check("solver.sign_symmetry", "sign of phi is preserved; even phi gives even fields", [](CheckResult& r) {
        bool sign_ok = true;
        double asym = 0.0;
        for (const ProblemParams& p : {ProblemParams{2.0, 0.5, 1.0, 1}, ProblemParams{0.8, 0.2, 1.0, 1}})
            for (double amp : {0.3, -0.3}) {
                SolverConfig c;
                c.grid = {1, 20.0, 400};
                c.snapshot_times = {0.5, 3.0};
                const Trajectory tr = solve_original(p, InitialPerturbation::smooth_bump({0.0, 0.0}, 2.0, amp), c);
                for (std::size_t k = 1; k < tr.times.size(); ++k) {
                    const GridField U = renormalize(p, tr.fields[k], tr.times[k]);
                    for (double v : U.values) sign_ok = sign_ok && (amp > 0 ? v >= -1e-14 : v <= 1e-14);
                    const std::size_t n = U.size();
                    for (std::size_t i = 0; i < n; ++i)
                        asym = std::max(asym, std::abs(U.values[i] - U.values[n - 1 - i]));
                }
            }
        verdict(r, sign_ok && asym < 1e-12, fmt::format("sign preserved {}, max asymmetry {:.2e}", sign_ok, asym));
    });
}

CheckResult solver_2d()
{
    return timed_check("solver.linear_2d", "2-D linear run matches the heat flow", [](CheckResult& r) {
        const ProblemParams p{1.0, 0.0, 1.0, 2};
        const auto phi = InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.5);
        const Trajectory tr = solve_original(p, phi, fixed({2, 12.0, 96}, 0.01, {1.0}));
        const GridField U = renormalize(p, tr.fields.back(), 1.0);
        const GridField exact = GridField::sample(U.spec, [](std::span<const double> x) {
            return 0.5 / 5.0 * std::exp(-(x[0] * x[0] + x[1] * x[1]) / 5.0);
        });
        const double err = lq_norm(U - exact, kInf);
        verdict(r, err < 2e-3, fmt::format("max err {:.2e} (tol 2e-3)", err));
    });
}

// ---------------------------------------------------------------- harness

CheckResult harness_renormalize()
{
    return timed_check("harness.renormalize", "unrenormalize inverts renormalize; uniform fields", [](CheckResult& r) {
        const ProblemParams p{0.8, 0.2, 1.3, 1};
        const GridSpec spec{1, 10.0, 100};
        const GridField u = GridField::sample(spec, [&](std::span<const double> x) {
            return zeta(p, p.lambda, 2.0) * (1.0 + 0.1 * std::exp(-x[0] * x[0]));
        });
        const double round = lq_norm(unrenormalize(p, renormalize(p, u, 2.0), 2.0) - u, kInf);
        const GridField flat(spec, zeta(p, 1.7, 2.0));
        const double ode = ode_convergence_error(p, flat, 2.0);
        const double want = zeta(p, 1.7, 2.0) / zeta(p, p.lambda, 2.0) - 1.0;
        bool positivity = false;
        try {
            (void)renormalize(p, GridField(spec, -1.0), 2.0);
        } catch (const PositivityError&) {
            positivity = true;
        }
        verdict(r, round < 1e-13 && rel(ode, want) < 1e-13 && positivity,
                fmt::format("roundtrip {:.1e}, uniform ode error rel {:.1e}, u<=0 raises {}", round, rel(ode, want),
                            positivity));
    });
}

CheckResult harness_thm11_identities()
{
    return timed_check("harness.thm11", "thm11_error vanishes on the heat flow; q = r has unit prefactor", [](CheckResult& r) {
        const ProblemParams p{2.0, 0.5, 1.0, 1};
        const GridSpec spec{1, 30.0, 600};
        const GridField phi = InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.4).sample(spec);
        const double t = 3.0;
        const GridField heat = heat_semigroup(phi, sigma(p, t));
        const double zero = thm11_error(p, heat, phi, t, kInf, 2.0);
        const GridField other = 1.1 * heat;
        const double plain = lq_norm(other - heat, 2.0);
        const double same = thm11_error(p, other, phi, t, 2.0, 2.0);
        verdict(r, zero < 1e-15 && rel(same, plain) < 1e-12,
                fmt::format("on heat flow {:.1e}, q=r rel diff {:.1e}", zero, rel(same, plain)));
    });
}

CheckResult harness_thm12_synthetic()
{
    return timed_check("harness.thm12", "thm12_error vanishes on sum M_nu d^nu G(sigma)", [](CheckResult& r) {
        const ProblemParams p{2.0, 0.5, 1.0, 1};
        const GridSpec spec{1, 30.0, 600};
        ExpansionReport e;
        e.K = 1.0;
        e.dim = 1;
        e.M_constants = IndexMap{{MultiIndex({0}), 0.7}, {MultiIndex({1}), -0.2}};
        const double t = 2.0, s = sigma(p, t);
        const GridField U = 0.7 * gauss_deriv_field(spec, MultiIndex({0}), s) +
                            (-0.2) * gauss_deriv_field(spec, MultiIndex({1}), s);
        const Thm12Error err = thm12_error(p, U, e, t, 1.0, 1.0);
        verdict(r, err.raw < 1e-15 && err.compensated < 1e-14, fmt::format("raw {:.1e}", err.raw));
    });
}

CheckResult harness_fit_rate()
{
    return timed_check("harness.fit_rate", "fit_rate on exact and perturbed power laws", [](CheckResult& r) {
        std::vector<std::pair<double, double>> a, b, c, scaled;
        for (const double t : log_spaced(1.0, 1e3, 10)) {
            a.emplace_back(t, 1.0 / t);
            b.emplace_back(t, 5.0 * std::pow(t, -0.75) * (1.0 + 0.01 * std::sin(std::log(t))));
            c.emplace_back(t, 3.0);
            scaled.emplace_back(t, 40.0 * b.back().second);
        }
        const double sa = fit_rate(a, 1.0).slope, sb = fit_rate(b, 1.0).slope, sc = fit_rate(c, 1.0).slope;
        const double ss = fit_rate(scaled, 1.0).slope;
        bool degenerate = false;
        try {
            (void)fit_rate({{1.0, 1.0}, {2.0, 0.5}, {3.0, 0.3}}, 1.0);
        } catch (const DegenerateWindow&) {
            degenerate = true;
        }
        const bool ok = std::abs(sa + 1.0) < 1e-9 && std::abs(sb + 0.75) < 0.02 && std::abs(sc) < 1e-12 &&
                        std::abs(ss - sb) < 1e-12 && degenerate;
        verdict(r, ok, fmt::format("slopes {:.12f} {:.4f} {:.1e}, scaled diff {:.1e}, short window raises {}", sa, sb,
                                   sc, std::abs(ss - sb), degenerate));
    });
}

CheckResult harness_linear_mass()
{
    return timed_check("harness.linear_M0", "linear run: M_0 equals the integral of phi; odd M vanish for even phi",
                       [](CheckResult& r) {
        const ProblemParams p{1.0, 0.0, 1.0, 1};
        const auto phi = InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.5);
        SolverConfig c = fixed({1, 40.0, 800}, 0.02, {});
        c.snapshot_times = log_spaced(1.0, 20.0, 10);
        const Trajectory tr = solve_original(p, phi, c);
        const ExpansionReport e = estimate_M(p, tr, 1.0);
        const double mass = oracle::integrate([](double x) { return 0.5 * std::exp(-x * x); }, -40.0, 40.0);
        const double m0 = e.M_constants->at(MultiIndex({0}));
        const double m1 = e.M_constants->at(MultiIndex({1}));
        verdict(r, rel(m0, mass) < 1e-6 && std::abs(m1) < 1e-6,
                fmt::format("M_0 {:.12f} vs {:.12f}, |M_1| {:.1e}", m0, mass, std::abs(m1)));
    });
}

CheckResult harness_w_of()
{
    return timed_check("harness.w_of", "w_of reproduces snapshots and rejects times outside the run", [](CheckResult& r) {
        const ProblemParams p{2.0, 0.5, 1.0, 1};
        SolverConfig c;
        c.grid = {1, 20.0, 200};
        c.snapshot_times = {0.5, 1.0, 2.0, 4.0};
        const Trajectory tr = solve_original(p, InitialPerturbation::gaussian({0.0, 0.0}, 1.0, 0.2), c);
        const GridField at = w_of(p, tr, sigma(p, 2.0));
        const double diff = lq_norm(at - renormalize(p, tr.fields[3], 2.0), kInf);
        bool out = false;
        try {
            (void)w_of(p, tr, sigma(p, 10.0));
        } catch (const OutOfRangeError&) {
            out = true;
        }
        verdict(r, diff < 1e-12 && out, fmt::format("snapshot diff {:.1e}, out of range raises {}", diff, out));
    });
}

// ---------------------------------------------------------------- config/io

constexpr const char* kSampleConfig = R"([problem]
m = 2
alpha = 0.5
lambda = 1
dim = 1

[phi]
kind = smooth_bump
center = 0.5
radius = 2
amplitude = 0.3

[grid]
half_width = 60
points_per_axis = 1200

[solver]
stepper = adaptive
cfl_safety = 0.02

[snapshots]
kind = log_sigma
from = 1
to = 100
per_decade = 10

[analysis]
list = thm11 inf 2; thm12 1 0; ode_limit

[output]
dir = out
seed = 7
)";

CheckResult config_roundtrip()
{
    return timed_check("config.roundtrip", "parse -> serialize -> parse is the identity", [](CheckResult& r) {
        const ExperimentConfig a = parse_config(kSampleConfig);
        const std::string text = serialize_config(a);
        const ExperimentConfig b = parse_config(text);
        verdict(r, a == b && serialize_config(b) == text, fmt::format("equal {}", a == b));
    });
}

CheckResult config_errors()
{
    return timed_check("config.errors", "malformed configs name the offending field", [](CheckResult& r) {
        std::string fields;
        int named = 0;
        auto probe = [&](std::string text, const std::string& expect) {
            try {
                parse_config(text).validate();
            } catch (const ConfigError& e) {
                fields += e.field() + " ";
                named += e.field() == expect ? 1 : 0;
            }
        };
        std::string bad_alpha = kSampleConfig;
        bad_alpha.replace(bad_alpha.find("alpha = 0.5"), 11, "alpha = 1.5");
        probe(bad_alpha, "problem.alpha");
        probe(std::string(kSampleConfig) + "[extra]\nfoo = 1\n", "extra");
        std::string bad_key = kSampleConfig;
        bad_key.replace(bad_key.find("lambda = 1"), 10, "lamda = 1");
        probe(bad_key, "problem.lamda");
        verdict(r, named == 3, fmt::format("fields reported: {}", fields));
    });
}

CheckResult io_roundtrips()
{
    return timed_check("io.roundtrip", "field CSV and expansion report round-trip exactly", [](CheckResult& r) {
        bool ok = true;
        for (int dim : {1, 2}) {
            const GridSpec spec{dim, 7.5, dim == 1 ? 30 : 12};
            const GridField f = InitialPerturbation::gaussian({0.3, -0.2}, 1.1, 0.9).sample(spec);
            const GridField g = field_from_csv(field_to_csv(f));
            ok = ok && g.spec == f.spec && g.values == f.values;
        }
        const GridField f = InitialPerturbation::gaussian({0.3, 0.0}, 1.0, 1.0).sample(GridSpec{1, 20.0, 400});
        ExpansionReport e = expand(f, 2.0, 1.0);
        e.M_constants = e.coefficients;
        const ExpansionReport back = ExpansionReport::parse(e.serialize());
        ok = ok && back.serialize() == e.serialize() && back.coefficients == e.coefficients;
        verdict(r, ok, ok ? "identical" : "mismatch");
    });
}

// ---------------------------------------------------------------- kernels

CheckResult kernels_agree()
{
    return timed_check("kernels.ref_par", "OpenMP kernels agree with the serial reference", [](CheckResult& r) {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const int n = 96;
        std::vector<double> a(static_cast<std::size_t>(n * n)), b(a.size()), w(a.size());
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = u(rng);
        for (auto& v : w) v = 1.0 + u(rng) * u(rng);
        std::vector<double> taps(static_cast<std::size_t>(2 * n - 1));
        for (std::size_t k = 0; k < taps.size(); ++k) taps[k] = std::exp(-0.01 * std::pow(double(k) - n + 1, 2));
        double worst = 0.0;
        auto cmp = [&](double x, double y) { worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(y))); };
        cmp(kernels::par::dot(a, b), kernels::ref::dot(a, b));
        cmp(kernels::par::sum_abs_pow(a, 1.0), kernels::ref::sum_abs_pow(a, 1.0));
        cmp(kernels::par::sum_abs_pow(a, 2.5), kernels::ref::sum_abs_pow(a, 2.5));
        cmp(kernels::par::max_abs(a), kernels::ref::max_abs(a));
        cmp(kernels::par::weighted_abs_sum(a, w), kernels::ref::weighted_abs_sum(a, w));
        std::vector<double> o1(a.size()), o2(a.size());
        for (int axis : {0, 1}) {
            kernels::par::convolve_square_axis(a, n, axis, taps, o1);
            kernels::ref::convolve_square_axis(a, n, axis, taps, o2);
            for (std::size_t k = 0; k < o1.size(); ++k) cmp(o1[k], o2[k]);
        }
        std::vector<double> fx(static_cast<std::size_t>((n + 1) * n), 1.3), fy(fx.size(), 0.7);
        kernels::par::five_point_apply(a, n, 0.1, 4.0, fx, fy, o1);
        kernels::ref::five_point_apply(a, n, 0.1, 4.0, fx, fy, o2);
        for (std::size_t k = 0; k < o1.size(); ++k) cmp(o1[k], o2[k]);
        verdict(r, worst < 1e-12, fmt::format("max rel diff {:.1e} on {} threads", worst, kernels::thread_count()));
    });
}

} // namespace

std::vector<CheckResult> property_suite(const SuiteOptions& opts)
{
    std::vector<CheckResult> out;
    out.push_back(zeta_vs_rk4());
    out.push_back(eta_composition());
    out.push_back(tau_star_quadrature());
    out.push_back(profile_domain_errors());
    out.push_back(gauss_deriv_fd(opts));
    out.push_back(gauss_vs_multi());
    out.push_back(kernel_moments());
    out.push_back(semigroup_law());
    out.push_back(moments_recover_coefficients());
    out.push_back(moments_permutation());
    out.push_back(moments_linear());
    out.push_back(duhamel_zero());
    out.push_back(residual_zero_field());
    out.push_back(solver_zero());
    out.push_back(solver_refinement());
    out.push_back(solver_rescaled_agreement());
    out.push_back(solver_sign_and_symmetry());
    out.push_back(solver_2d());
    out.push_back(harness_renormalize());
    out.push_back(harness_thm11_identities());
    out.push_back(harness_thm12_synthetic());
    out.push_back(harness_fit_rate());
    out.push_back(harness_linear_mass());
    out.push_back(harness_w_of());
    out.push_back(config_roundtrip());
    out.push_back(config_errors());
    out.push_back(io_roundtrips());
    out.push_back(kernels_agree());
    return out;
}

} // namespace ndlab::checks
