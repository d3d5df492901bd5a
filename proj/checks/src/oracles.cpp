#include "ndlab/checks/oracles.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

namespace ndlab::oracle {

double rk4_zeta(double alpha, double mu, double t, double step)
{
    auto f = [alpha](double z) { return std::pow(z, alpha); };
    const long steps = std::max(1L, std::lround(std::ceil(t / step)));
    const double h = t / static_cast<double>(steps);
    double z = mu;
    for (long k = 0; k < steps; ++k) {
        const double k1 = f(z);
        const double k2 = f(z + 0.5 * h * k1);
        const double k3 = f(z + 0.5 * h * k2);
        const double k4 = f(z + h * k3);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, rel_tol);
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol)
{
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([&](double s) { return f(a + s); }, rel_tol);
}

double sigma_quadrature(double m, double alpha, double lambda, double t)
{
    const double e = 1.0 - alpha;
    auto integrand = [=](double s) {
        const double z = std::pow(std::pow(lambda, e) + e * s, 1.0 / e);
        return m * std::pow(z, m - 1.0);
    };
    if (t <= 1.0) return integrate(integrand, 0.0, t);
    // split geometrically so the integrand is well resolved on every piece
    double total = integrate(integrand, 0.0, 1.0);
    for (double a = 1.0; a < t; a *= 4.0) total += integrate(integrand, a, std::min(4.0 * a, t));
    return total;
}

double bisection(const std::function<double(double)>& g, double target, double lo, double hi, double rel_tol)
{
    for (int it = 0; it < 400 && hi - lo > rel_tol * std::max(std::abs(lo), std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

long double fd_derivative(const std::function<long double(long double)>& f, long double x, int n, long double h)
{
    auto central = [&](long double step) {
        long double sum = 0.0L, binom = 1.0L;
        for (int k = 0; k <= n; ++k) {
            const long double offset = (0.5L * n - k) * step;
            sum += ((k % 2 == 0) ? binom : -binom) * f(x + offset);
            binom = binom * (n - k) / (k + 1);
        }
        return sum / std::pow(step, static_cast<long double>(n));
    };
    constexpr int levels = 4;
    std::vector<long double> table(levels);
    for (int i = 0; i < levels; ++i) table[static_cast<std::size_t>(i)] = central(h / std::pow(2.0L, i));
    for (int j = 1; j < levels; ++j) {
        const long double factor = std::pow(4.0L, j);
        for (int i = levels - 1; i >= j; --i) {
            auto& ti = table[static_cast<std::size_t>(i)];
            ti = (factor * ti - table[static_cast<std::size_t>(i - 1)]) / (factor - 1.0L);
        }
    }
    return table[levels - 1];
}

double fd_first(const std::function<double(double)>& f, double t, double h)
{
    const double d1 = (f(t + h) - f(t - h)) / (2.0 * h);
    const double d2 = (f(t + 0.5 * h) - f(t - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

double gauss_moment(int l, double c, double t)
{
    // E[(c + Z)^l] with Z ~ N(0, 2t)
    const double var = 2.0 * t;
    double total = 0.0, binom = 1.0;
    for (int k = 0; k <= l; ++k) {
        if (k % 2 == 0) {
            double dfact = 1.0;
            for (int j = k - 1; j > 0; j -= 2) dfact *= j;
            total += binom * std::pow(c, l - k) * dfact * std::pow(var, 0.5 * k);
        }
        binom = binom * (l - k) / (k + 1);
    }
    return total;
}

double gauss_deriv_moment(int l, int n, double t)
{
    if (n > l) return 0.0;
    // int x^l G^(n) dx = (-1)^n l!/(l-n)! int x^(l-n) G dx
    double falling = 1.0;
    for (int k = 0; k < n; ++k) falling *= l - k;
    return (n % 2 == 0 ? 1.0 : -1.0) * falling * gauss_moment(l - n, 0.0, t);
}

} // namespace ndlab::oracle
