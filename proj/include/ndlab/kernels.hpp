#pragma once

// Data-parallel inner loops. `par` is what the library uses; `ref` is the
// plain serial reference kept for tests and the benchmark.
//
// Every `par` reduction sums fixed-size blocks and then combines the block
// sums in index order, so results do not depend on the thread count.

#include <cstddef>
#include <span>

namespace ndlab::kernels {

/// Block length of the deterministic reductions.
inline constexpr std::size_t kReductionBlock = 4096;

/// Number of OpenMP threads in use (1 without OpenMP).
int thread_count();

// `taps` has 2n-1 entries indexed by offset: taps[n-1+d] multiplies
// in[j] when computing out[j+d].

namespace ref {
void convolve_line(std::span<const double> in, std::span<const double> taps, std::span<double> out);
void convolve_square_axis(std::span<const double> in, int n, int axis,
                          std::span<const double> taps, std::span<double> out);
double sum_abs_pow(std::span<const double> v, double q);
double max_abs(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double weighted_abs_sum(std::span<const double> v, std::span<const double> w);
void five_point_apply(std::span<const double> v, int n, double coef, double inv_h2,
                      std::span<const double> face_x, std::span<const double> face_y,
                      std::span<double> out);
} // namespace ref

namespace par {
void convolve_line(std::span<const double> in, std::span<const double> taps, std::span<double> out);
void convolve_square_axis(std::span<const double> in, int n, int axis,
                          std::span<const double> taps, std::span<double> out);
double sum_abs_pow(std::span<const double> v, double q);
double max_abs(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double weighted_abs_sum(std::span<const double> v, std::span<const double> w);

/// out = v - coef * L v for the 2-D five-point operator acting on a field v
/// with zero Dirichlet ghosts. face_x has (n+1) x n entries (face between rows
/// i-1 and i at [i*n + j]); face_y has n x (n+1) entries (face between columns
/// j-1 and j at [i*(n+1) + j]). Used by the CG solver.
void five_point_apply(std::span<const double> v, int n, double coef, double inv_h2,
                      std::span<const double> face_x, std::span<const double> face_y,
                      std::span<double> out);
} // namespace par

} // namespace ndlab::kernels
