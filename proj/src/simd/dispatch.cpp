#include "calib/simd/cpu.hpp"
#include "calib/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace calib::simd {

namespace {

Backend detect() noexcept {
    if (const char* env = std::getenv("CALIB_SIMD"); env && std::strcmp(env, "scalar") == 0)
        return Backend::scalar;
    return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2:
#ifdef CALIB_HAVE_AVX2_KERNELS
            return cpu_has_avx2_fma();
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_available(b))
        throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(b)));
    current().store(b, std::memory_order_relaxed);
}

void reset_backend() noexcept { current().store(detect(), std::memory_order_relaxed); }

#ifdef CALIB_HAVE_AVX2_KERNELS
#define CALIB_DISPATCH(fn, ...)                                        \
    (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define CALIB_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    return CALIB_DISPATCH(dot, a.data(), b.data(), n);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    const std::size_t n = x.size() < y.size() ? x.size() : y.size();
    CALIB_DISPATCH(axpy, alpha, x.data(), y.data(), n);
}

void scale(double alpha, std::span<double> x) noexcept {
    CALIB_DISPATCH(scale, alpha, x.data(), x.size());
}

double max_value(std::span<const double> x) noexcept {
    return CALIB_DISPATCH(max_value, x.data(), x.size());
}

double sum(std::span<const double> x) noexcept { return CALIB_DISPATCH(sum, x.data(), x.size()); }

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias,
          std::span<double> out) noexcept {
    for (std::size_t r = 0; r < rows; ++r)
        out[r] = dot(w.subspan(r * cols, cols), x.first(cols)) + (bias.empty() ? 0.0 : bias[r]);
}

#undef CALIB_DISPATCH

}  // namespace calib::simd
