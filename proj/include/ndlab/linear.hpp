#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ndlab {

/// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]
/// (lower[0] and upper[n-1] are ignored). Requires a diagonally dominant system.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<const double> rhs,
                       std::span<double> x);

/// Thomas factorization kept for repeated solves with one matrix.
class TridiagonalFactor {
public:
    void factor(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper);
    void solve(std::span<const double> rhs, std::span<double> x) const;
    std::size_t size() const { return inv_denom_.size(); }

private:
    std::vector<double> lower_, c_, inv_denom_;
    mutable std::vector<double> d_;
};

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for (I - coef L) x = rhs with the
/// five-point operator of kernels::par::five_point_apply. `x` holds the
/// initial guess on entry.
CgResult solve_five_point_cg(int n, double coef, double inv_h2, std::span<const double> face_x,
                             std::span<const double> face_y, std::span<const double> rhs,
                             std::span<double> x, double tolerance = 1e-12, int max_iterations = 5000);

} // namespace ndlab
