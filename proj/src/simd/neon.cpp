#include "triage/simd/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace triage::simd {
namespace {

void min_merge_neon(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t s = vld1q_f64(src + i);
    float64x2_t d = vld1q_f64(dst + i);
    // Select rather than vminq_f64 so signed zeros match the scalar kernel.
    uint64x2_t lt = vcltq_f64(s, d);
    vst1q_f64(dst + i, vbslq_f64(lt, s, d));
  }
  for (; i < n; ++i) dst[i] = src[i] < dst[i] ? src[i] : dst[i];
}

std::size_t argmax_neon(const double* values, std::size_t n) {
  if (n < 4) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (values[i] > values[best]) best = i;
    }
    return best;
  }
  float64x2_t best_val = vld1q_f64(values);
  uint64x2_t best_idx = {0, 1};
  uint64x2_t idx = best_idx;
  const uint64x2_t step = vdupq_n_u64(2);
  std::size_t i = 2;
  for (; i + 2 <= n; i += 2) {
    idx = vaddq_u64(idx, step);
    float64x2_t v = vld1q_f64(values + i);
    uint64x2_t gt = vcgtq_f64(v, best_val);
    best_val = vbslq_f64(gt, v, best_val);
    best_idx = vbslq_u64(gt, idx, best_idx);
  }
  double v0 = vgetq_lane_f64(best_val, 0);
  double v1 = vgetq_lane_f64(best_val, 1);
  std::uint64_t i0 = vgetq_lane_u64(best_idx, 0);
  std::uint64_t i1 = vgetq_lane_u64(best_idx, 1);
  std::size_t best = (v1 > v0 || (v1 == v0 && i1 < i0)) ? i1 : i0;
  for (; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

void axpy_neon(double* dst, const double* src, double weight, std::size_t n) {
  const float64x2_t w = vdupq_n_f64(weight);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t product = vmulq_f64(w, vld1q_f64(src + i));
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), product));
  }
  for (; i < n; ++i) {
    double product = weight * src[i];
    dst[i] = dst[i] + product;
  }
}

constexpr KernelTable kNeon{Isa::kNeon, &min_merge_neon, &argmax_neon, &axpy_neon};

}  // namespace

const KernelTable* neon_kernels() { return &kNeon; }

}  // namespace triage::simd

#else

namespace triage::simd {
const KernelTable* neon_kernels() { return nullptr; }
}  // namespace triage::simd

#endif
