#pragma once

// Independent reference computations used by the property and acceptance
// suites. None of these call into the code path they are checking.

#include <functional>

namespace ndlab::oracle {

/// zeta(t) for zeta' = zeta^alpha, zeta(0) = mu, by classical RK4 with the given step.
double rk4_zeta(double alpha, double mu, double t, double step = 1e-4);

/// int_a^b f by adaptive Gauss-Kronrod (61 points).
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13);

/// int_a^inf f by exp-sinh quadrature.
double integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol = 1e-12);

/// sigma(t) = int_0^t m zeta_lambda^(m-1) ds by quadrature of the closed-form zeta.
double sigma_quadrature(double m, double alpha, double lambda, double t);

/// Root of increasing g on [lo, hi] with g(lo) <= target <= g(hi), to rel_tol.
double bisection(const std::function<double(double)>& g, double target, double lo, double hi,
                 double rel_tol = 1e-13);

/// n-th derivative of f at x: n-th central differences in long double,
/// Richardson-extrapolated over four step halvings starting at h.
long double fd_derivative(const std::function<long double(long double)>& f, long double x, int n, long double h);

/// d/dt f at t via central differences with one Richardson extrapolation.
double fd_first(const std::function<double(double)>& f, double t, double h);

/// int x^l G(x - c, t) dx for the one-dimensional Gauss kernel (closed form).
double gauss_moment(int l, double c, double t);

/// int x^l d^n/dx^n G(x, t) dx (closed form, by parts).
double gauss_deriv_moment(int l, int n, double t);

} // namespace ndlab::oracle
