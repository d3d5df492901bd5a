#pragma once

// Gauss kernel G(x,t) = (4 pi t)^(-N/2) exp(-|x|^2 / 4t), its spatial
// derivatives, the shifted kernels g_nu(x,t) = (-1)^|nu| / nu! d^nu G(x,t+1),
// the heat semigroup on grid fields and the norms used by the analyses.

#include "ndlab/errors.hpp"
#include "ndlab/grid.hpp"

#include <limits>
#include <span>

namespace ndlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double gauss(std::span<const double> x, double t);

/// d^n/dx^n of the one-dimensional kernel, via the Hermite three-term recurrence.
double gauss_deriv_1d(int n, double x, double t);

double gauss_deriv(const MultiIndex& nu, std::span<const double> x, double t);
double g_kernel(const MultiIndex& nu, std::span<const double> x, double t);

GridField gauss_field(const GridSpec& spec, double t, Point center = {0.0, 0.0});
GridField gauss_deriv_field(const GridSpec& spec, const MultiIndex& nu, double t);
GridField g_kernel_field(const GridSpec& spec, const MultiIndex& nu, double t);

struct SemigroupOptions {
    /// Warn when max |f| on the boundary exceeds this fraction of max |f|.
    double boundary_threshold = 1e-8;
};

/// e^{t Delta} f by midpoint quadrature (direct sum in 1-D, two separable
/// passes in 2-D).
GridField heat_semigroup(const GridField& f, double t, Warnings* warnings = nullptr,
                         const SemigroupOptions& opts = {});

double integral(const GridField& f);
/// Midpoint L^q norm; q = kInf gives the grid max of |f|.
double lq_norm(const GridField& f, double q);
/// int |f| (1 + |x|^K) dx
double weighted_norm(const GridField& f, double K);
/// max |f| over the outermost ring of nodes.
double boundary_max(const GridField& f);
/// True when the boundary ring is below threshold * max |f| (or f == 0).
bool boundary_negligible(const GridField& f, double threshold);

} // namespace ndlab
