#include "ndlab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace ndlab::kernels::ref {

void convolve_line(std::span<const double> in, std::span<const double> taps, std::span<double> out)
{
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += taps[n - 1 + i - j] * in[j];
        out[i] = acc;
    }
}

void convolve_square_axis(std::span<const double> in, int n, int axis,
                          std::span<const double> taps, std::span<double> out)
{
    const auto N = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < N; ++k) {
                const double v = axis == 0 ? in[k * N + j] : in[i * N + k];
                const std::size_t pos = axis == 0 ? i : j;
                acc += taps[N - 1 + pos - k] * v;
            }
            out[i * N + j] = acc;
        }
}

double sum_abs_pow(std::span<const double> v, double q)
{
    double acc = 0.0;
    for (double x : v) acc += q == 1.0 ? std::abs(x) : std::pow(std::abs(x), q);
    return acc;
}

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_abs_sum(std::span<const double> v, std::span<const double> w)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::abs(v[i]) * w[i];
    return acc;
}

void five_point_apply(std::span<const double> v, int n, double coef, double inv_h2,
                      std::span<const double> face_x, std::span<const double> face_y,
                      std::span<double> out)
{
    const auto N = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const double c = v[i * N + j];
            const double up = i > 0 ? v[(i - 1) * N + j] : 0.0;
            const double down = i + 1 < N ? v[(i + 1) * N + j] : 0.0;
            const double left = j > 0 ? v[i * N + j - 1] : 0.0;
            const double right = j + 1 < N ? v[i * N + j + 1] : 0.0;
            const double lap = face_x[(i + 1) * N + j] * (down - c) - face_x[i * N + j] * (c - up)
                             + face_y[i * (N + 1) + j + 1] * (right - c)
                             - face_y[i * (N + 1) + j] * (c - left);
            out[i * N + j] = c - coef * inv_h2 * lap;
        }
}

} // namespace ndlab::kernels::ref
