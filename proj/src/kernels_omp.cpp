#include "ndlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef NDLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace ndlab::kernels {

int thread_count()
{
#ifdef NDLAB_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace par {

namespace {

// Fixed-size block partials combined in index order.
template <typename BlockFn>
double blocked_sum(std::size_t n, BlockFn&& block)
{
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(blocks, 0.0);
    const auto nb = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        partial[static_cast<std::size_t>(b)] = block(lo, hi);
    }
    double acc = 0.0;
    for (double p : partial) acc += p;
    return acc;
}

std::vector<double> reversed(std::span<const double> taps)
{
    return std::vector<double>(taps.rbegin(), taps.rend());
}

} // namespace

void convolve_line(std::span<const double> in, std::span<const double> taps, std::span<double> out)
{
    const std::size_t n = in.size();
    // rt[n-1-i+j] == taps[n-1+i-j], contiguous in j
    const std::vector<double> rt = reversed(taps);
    const auto ni = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < ni; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double* row = rt.data() + (n - 1 - i);
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * in[j];
        out[i] = acc;
    }
}

void convolve_square_axis(std::span<const double> in, int n, int axis,
                          std::span<const double> taps, std::span<double> out)
{
    const auto N = static_cast<std::size_t>(n);
    if (axis == 1) {
        const std::vector<double> rt = reversed(taps);
#pragma omp parallel for schedule(static)
        for (int ii = 0; ii < n; ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            for (std::size_t j = 0; j < N; ++j) {
                const double* row = rt.data() + (N - 1 - j);
                const double* src = in.data() + i * N;
                double acc = 0.0;
#pragma omp simd reduction(+ : acc)
                for (std::size_t k = 0; k < N; ++k) acc += row[k] * src[k];
                out[i * N + j] = acc;
            }
        }
        return;
    }
    // axis 0: out row i accumulates taps-weighted input rows k
#pragma omp parallel for schedule(static)
    for (int ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double* dst = out.data() + i * N;
        std::fill(dst, dst + N, 0.0);
        for (std::size_t k = 0; k < N; ++k) {
            const double w = taps[N - 1 + i - k];
            const double* src = in.data() + k * N;
#pragma omp simd
            for (std::size_t j = 0; j < N; ++j) dst[j] += w * src[j];
        }
    }
}

double sum_abs_pow(std::span<const double> v, double q)
{
    return blocked_sum(v.size(), [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        if (q == 1.0)
            for (std::size_t i = lo; i < hi; ++i) acc += std::abs(v[i]);
        else if (q == 2.0)
            for (std::size_t i = lo; i < hi; ++i) acc += v[i] * v[i];
        else
            for (std::size_t i = lo; i < hi; ++i) acc += std::pow(std::abs(v[i]), q);
        return acc;
    });
}

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    const auto n = static_cast<long long>(v.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (long long i = 0; i < n; ++i) m = std::max(m, std::abs(v[static_cast<std::size_t>(i)]));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += a[i] * b[i];
        return acc;
    });
}

double weighted_abs_sum(std::span<const double> v, std::span<const double> w)
{
    return blocked_sum(v.size(), [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += std::abs(v[i]) * w[i];
        return acc;
    });
}

void five_point_apply(std::span<const double> v, int n, double coef, double inv_h2,
                      std::span<const double> face_x, std::span<const double> face_y,
                      std::span<double> out)
{
    const auto N = static_cast<std::size_t>(n);
    const double s = coef * inv_h2;
#pragma omp parallel for schedule(static)
    for (int ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double* row = v.data() + i * N;
        const double* up = i > 0 ? v.data() + (i - 1) * N : nullptr;
        const double* down = i + 1 < N ? v.data() + (i + 1) * N : nullptr;
        const double* fu = face_x.data() + i * N;
        const double* fd = face_x.data() + (i + 1) * N;
        const double* fy = face_y.data() + i * (N + 1);
        for (std::size_t j = 0; j < N; ++j) {
            const double c = row[j];
            const double u = up ? up[j] : 0.0;
            const double d = down ? down[j] : 0.0;
            const double l = j > 0 ? row[j - 1] : 0.0;
            const double r = j + 1 < N ? row[j + 1] : 0.0;
            const double lap = fd[j] * (d - c) - fu[j] * (c - u) + fy[j + 1] * (r - c) - fy[j] * (c - l);
            out[i * N + j] = c - s * lap;
        }
    }
}

} // namespace par
} // namespace ndlab::kernels
