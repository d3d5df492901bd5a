#include "ndlab/gauss.hpp"

#include "ndlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/core.h>

namespace ndlab {

namespace {

void require_positive_time(double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError(fmt::format("kernel time must be > 0 (got {})", t));
}

double sign_for(int order) { return order % 2 == 0 ? 1.0 : -1.0; }

// One-axis factor table of d^n G_1(x_i, t) over the grid coordinates.
std::vector<double> axis_factor(const GridSpec& spec, int n, double t)
{
    std::vector<double> out(static_cast<std::size_t>(spec.points_per_axis));
    for (int i = 0; i < spec.points_per_axis; ++i)
        out[static_cast<std::size_t>(i)] = gauss_deriv_1d(n, spec.coord(i), t);
    return out;
}

GridField tensor_field(const GridSpec& spec, const MultiIndex& nu, double t, double scale)
{
    spec.validate();
    if (nu.dim() != spec.dim) throw DomainError("multi-index dimension does not match grid");
    GridField f(spec);
    const auto n = static_cast<std::size_t>(spec.points_per_axis);
    const auto fx = axis_factor(spec, nu[0], t);
    if (spec.dim == 1) {
        for (std::size_t i = 0; i < n; ++i) f.values[i] = scale * fx[i];
        return f;
    }
    const auto fy = axis_factor(spec, nu[1], t);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) f.values[i * n + j] = scale * fx[i] * fy[j];
    return f;
}

std::vector<double> heat_taps(const GridSpec& spec, double t)
{
    const int n = spec.points_per_axis;
    const double h = spec.spacing();
    std::vector<double> taps(static_cast<std::size_t>(2 * n - 1));
    for (int d = -(n - 1); d <= n - 1; ++d)
        taps[static_cast<std::size_t>(n - 1 + d)] = h * gauss_deriv_1d(0, d * h, t);
    return taps;
}

} // namespace

double gauss(std::span<const double> x, double t)
{
    require_positive_time(t);
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    const double n = static_cast<double>(x.size());
    return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-r2 / (4.0 * t));
}

double gauss_deriv_1d(int n, double x, double t)
{
    require_positive_time(t);
    if (n < 0) throw DomainError("derivative order must be >= 0");
    // d^n/dx^n exp(-(a x)^2) = (-a)^n H_n(a x) exp(-(a x)^2), physicists' H_n
    const double a = 1.0 / std::sqrt(4.0 * t);
    const double y = a * x;
    double h_prev = 1.0, h = 2.0 * y;
    if (n == 0) h = 1.0;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * y * h - 2.0 * k * h_prev;
        h_prev = h;
        h = next;
    }
    const double base = std::exp(-y * y) / std::sqrt(4.0 * std::numbers::pi * t);
    return std::pow(-a, n) * h * base;
}

double gauss_deriv(const MultiIndex& nu, std::span<const double> x, double t)
{
    if (static_cast<std::size_t>(nu.dim()) != x.size())
        throw DomainError("multi-index dimension does not match point");
    double v = 1.0;
    for (int i = 0; i < nu.dim(); ++i) v *= gauss_deriv_1d(nu[i], x[static_cast<std::size_t>(i)], t);
    return v;
}

double g_kernel(const MultiIndex& nu, std::span<const double> x, double t)
{
    if (!(t >= 0.0)) throw DomainError(fmt::format("g_nu needs t >= 0 (got {})", t));
    return sign_for(nu.order()) / nu.factorial() * gauss_deriv(nu, x, t + 1.0);
}

GridField gauss_field(const GridSpec& spec, double t, Point center)
{
    require_positive_time(t);
    return GridField::sample(spec, [&](std::span<const double> x) {
        Point shifted{x[0] - center[0], spec.dim > 1 ? x[1] - center[1] : 0.0};
        return gauss(std::span<const double>(shifted.data(), x.size()), t);
    });
}

GridField gauss_deriv_field(const GridSpec& spec, const MultiIndex& nu, double t)
{
    require_positive_time(t);
    return tensor_field(spec, nu, t, 1.0);
}

GridField g_kernel_field(const GridSpec& spec, const MultiIndex& nu, double t)
{
    if (!(t >= 0.0)) throw DomainError(fmt::format("g_nu needs t >= 0 (got {})", t));
    return tensor_field(spec, nu, t + 1.0, sign_for(nu.order()) / nu.factorial());
}

GridField heat_semigroup(const GridField& f, double t, Warnings* warnings, const SemigroupOptions& opts)
{
    require_positive_time(t);
    const GridSpec& spec = f.spec;
    if (!boundary_negligible(f, opts.boundary_threshold))
        warn(warnings, fmt::format("heat_semigroup: boundary mass {:.3e} not negligible", boundary_max(f)));
    if (std::sqrt(2.0 * t) < spec.spacing())
        warn(warnings, fmt::format("heat_semigroup: kernel width {:.3e} below grid spacing {:.3e}",
                                   std::sqrt(2.0 * t), spec.spacing()));
    const auto taps = heat_taps(spec, t);
    GridField out(spec);
    if (spec.dim == 1) {
        kernels::par::convolve_line(f.values, taps, out.values);
        return out;
    }
    GridField tmp(spec);
    kernels::par::convolve_square_axis(f.values, spec.points_per_axis, 1, taps, tmp.values);
    kernels::par::convolve_square_axis(tmp.values, spec.points_per_axis, 0, taps, out.values);
    return out;
}

double integral(const GridField& f)
{
    std::vector<double> ones(f.size(), 1.0);
    return f.spec.cell_volume() * kernels::par::dot(f.values, ones);
}

double lq_norm(const GridField& f, double q)
{
    if (!(q >= 1.0)) throw DomainError(fmt::format("q must be in [1, inf] (got {})", q));
    if (std::isinf(q)) return kernels::par::max_abs(f.values);
    const double s = kernels::par::sum_abs_pow(f.values, q) * f.spec.cell_volume();
    return q == 1.0 ? s : std::pow(s, 1.0 / q);
}

double weighted_norm(const GridField& f, double K)
{
    if (!(K >= 0.0)) throw DomainError(fmt::format("K must be >= 0 (got {})", K));
    std::vector<double> weight(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Point x = f.node(k);
        const double r = std::hypot(x[0], f.spec.dim > 1 ? x[1] : 0.0);
        weight[k] = 1.0 + (K == 0.0 ? 1.0 : std::pow(r, K));
    }
    return f.spec.cell_volume() * kernels::par::weighted_abs_sum(f.values, weight);
}

double boundary_max(const GridField& f)
{
    const auto n = static_cast<std::size_t>(f.spec.points_per_axis);
    const auto& v = f.values;
    if (f.spec.dim == 1) return std::max(std::abs(v.front()), std::abs(v.back()));
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        m = std::max({m, std::abs(v[j]), std::abs(v[(n - 1) * n + j]), std::abs(v[j * n]),
                      std::abs(v[j * n + n - 1])});
    }
    return m;
}

bool boundary_negligible(const GridField& f, double threshold)
{
    const double peak = kernels::par::max_abs(f.values);
    return peak == 0.0 || boundary_max(f) <= threshold * peak;
}

} // namespace ndlab
