#pragma once

// Dense double-precision kernels used by the training loops (logistic
// regression, affine and MLP scaling). Every kernel has a scalar reference
// implementation; vectorized variants are selected once at runtime from the
// CPU feature flags and can be overridden for testing.

#include <cstddef>
#include <span>
#include <string_view>

namespace calib::simd {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b) noexcept;

// Backend currently used by the dispatching entry points below.
Backend active_backend() noexcept;

// True when the binary carries the variant and the CPU can run it.
bool backend_available(Backend b) noexcept;

// Forces a backend; throws std::invalid_argument when unavailable.
// Not thread-safe with respect to concurrent kernel calls.
void set_backend(Backend b);

// Restores the runtime-detected default (honours CALIB_SIMD=scalar).
void reset_backend() noexcept;

double dot(std::span<const double> a, std::span<const double> b) noexcept;

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

// x *= alpha
void scale(double alpha, std::span<double> x) noexcept;

double max_value(std::span<const double> x) noexcept;

double sum(std::span<const double> x) noexcept;

// out[r] = dot(w.row(r), x) + bias[r] for a row-major rows x cols matrix w.
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias,
          std::span<double> out) noexcept;

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void scale(double alpha, double* x, std::size_t n) noexcept;
double max_value(const double* x, std::size_t n) noexcept;
double sum(const double* x, std::size_t n) noexcept;
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void scale(double alpha, double* x, std::size_t n) noexcept;
double max_value(const double* x, std::size_t n) noexcept;
double sum(const double* x, std::size_t n) noexcept;
}  // namespace avx2

}  // namespace calib::simd
