#pragma once

namespace calib::simd {

bool cpu_has_avx2_fma() noexcept;

}  // namespace calib::simd
