#include "ndlab/linear.hpp"

#include "ndlab/errors.hpp"
#include "ndlab/kernels.hpp"

#include <cmath>

namespace ndlab {

void TridiagonalFactor::factor(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper)
{
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n) throw DomainError("tridiagonal system size mismatch");
    lower_.assign(lower.begin(), lower.end());
    c_.resize(n);
    inv_denom_.resize(n);
    d_.resize(n);
    if (n == 0) return;
    inv_denom_[0] = 1.0 / diag[0];
    c_[0] = upper[0] * inv_denom_[0];
    for (std::size_t i = 1; i < n; ++i) {
        inv_denom_[i] = 1.0 / (diag[i] - lower[i] * c_[i - 1]);
        c_[i] = upper[i] * inv_denom_[i];
    }
}

void TridiagonalFactor::solve(std::span<const double> rhs, std::span<double> x) const
{
    const std::size_t n = inv_denom_.size();
    if (rhs.size() != n || x.size() != n) throw DomainError("tridiagonal system size mismatch");
    if (n == 0) return;
    d_[0] = rhs[0] * inv_denom_[0];
    for (std::size_t i = 1; i < n; ++i) d_[i] = (rhs[i] - lower_[i] * d_[i - 1]) * inv_denom_[i];
    x[n - 1] = d_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d_[i] - c_[i] * x[i + 1];
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<const double> rhs,
                       std::span<double> x)
{
    if (rhs.size() != diag.size() || x.size() != diag.size()) throw DomainError("tridiagonal system size mismatch");
    TridiagonalFactor f;
    f.factor(lower, diag, upper);
    f.solve(rhs, x);
}

CgResult solve_five_point_cg(int n, double coef, double inv_h2, std::span<const double> face_x,
                             std::span<const double> face_y, std::span<const double> rhs,
                             std::span<double> x, double tolerance, int max_iterations)
{
    const auto N = static_cast<std::size_t>(n);
    const std::size_t size = N * N;
    std::vector<double> inv_diag(size), r(size), z(size), p(size), Ap(size);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const double sum = face_x[i * N + j] + face_x[(i + 1) * N + j] + face_y[i * (N + 1) + j]
                             + face_y[i * (N + 1) + j + 1];
            inv_diag[i * N + j] = 1.0 / (1.0 + coef * inv_h2 * sum);
        }

    kernels::par::five_point_apply(x, n, coef, inv_h2, face_x, face_y, Ap);
    for (std::size_t k = 0; k < size; ++k) r[k] = rhs[k] - Ap[k];
    const double rhs_norm = std::sqrt(kernels::par::dot(rhs, rhs));
    CgResult result;
    if (rhs_norm == 0.0) {
        for (auto& v : x) v = 0.0;
        result.converged = true;
        return result;
    }
    for (std::size_t k = 0; k < size; ++k) z[k] = inv_diag[k] * r[k];
    p = z;
    double rz = kernels::par::dot(r, z);
    for (int it = 0; it < max_iterations; ++it) {
        const double res = std::sqrt(kernels::par::dot(r, r)) / rhs_norm;
        result.iterations = it;
        result.relative_residual = res;
        if (res <= tolerance) {
            result.converged = true;
            return result;
        }
        kernels::par::five_point_apply(p, n, coef, inv_h2, face_x, face_y, Ap);
        const double a = rz / kernels::par::dot(p, Ap);
        for (std::size_t k = 0; k < size; ++k) {
            x[k] += a * p[k];
            r[k] -= a * Ap[k];
            z[k] = inv_diag[k] * r[k];
        }
        const double rz_next = kernels::par::dot(r, z);
        const double b = rz_next / rz;
        rz = rz_next;
        for (std::size_t k = 0; k < size; ++k) p[k] = z[k] + b * p[k];
    }
    result.relative_residual = std::sqrt(kernels::par::dot(r, r)) / rhs_norm;
    result.converged = result.relative_residual <= tolerance;
    return result;
}

} // namespace ndlab
