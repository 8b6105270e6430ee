#include "calib/simd/kernels.hpp"

#include <limits>

namespace calib::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double max_value(const double* x, std::size_t n) noexcept {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

double sum(const double* x, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

}  // namespace calib::simd::scalar
