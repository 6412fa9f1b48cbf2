// Compiled with -mavx2 (and nothing wider); only reached after a runtime
// CPU check.
#include "triage/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace triage::simd {
namespace {

void min_merge_avx2(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_loadu_pd(src + i);
    __m256d d = _mm256_loadu_pd(dst + i);
    // minpd(a, b) == (a < b ? a : b), same as the scalar kernel.
    _mm256_storeu_pd(dst + i, _mm256_min_pd(s, d));
  }
  for (; i < n; ++i) dst[i] = src[i] < dst[i] ? src[i] : dst[i];
}

std::size_t argmax_avx2(const double* values, std::size_t n) {
  if (n < 8) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (values[i] > values[best]) best = i;
    }
    return best;
  }
  // Per-lane running maximum; strict > keeps the first index within a lane.
  __m256d best_val = _mm256_loadu_pd(values);
  __m256d best_idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  __m256d idx = best_idx;
  const __m256d step = _mm256_set1_pd(4.0);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    idx = _mm256_add_pd(idx, step);
    __m256d v = _mm256_loadu_pd(values + i);
    __m256d gt = _mm256_cmp_pd(v, best_val, _CMP_GT_OQ);
    best_val = _mm256_blendv_pd(best_val, v, gt);
    best_idx = _mm256_blendv_pd(best_idx, idx, gt);
  }
  alignas(32) double lane_val[4];
  alignas(32) double lane_idx[4];
  _mm256_store_pd(lane_val, best_val);
  _mm256_store_pd(lane_idx, best_idx);
  double max_val = lane_val[0];
  double max_idx = lane_idx[0];
  for (int l = 1; l < 4; ++l) {
    if (lane_val[l] > max_val || (lane_val[l] == max_val && lane_idx[l] < max_idx)) {
      max_val = lane_val[l];
      max_idx = lane_idx[l];
    }
  }
  std::size_t best = static_cast<std::size_t>(max_idx);
  // Tail indices exceed every lane index, so only a strictly larger value wins.
  for (; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

void axpy_avx2(double* dst, const double* src, double weight, std::size_t n) {
  const __m256d w = _mm256_set1_pd(weight);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d product = _mm256_mul_pd(w, _mm256_loadu_pd(src + i));
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), product));
  }
  for (; i < n; ++i) {
    double product = weight * src[i];
    dst[i] = dst[i] + product;
  }
}

constexpr KernelTable kAvx2{Isa::kAvx2, &min_merge_avx2, &argmax_avx2, &axpy_avx2};

}  // namespace

const KernelTable* avx2_kernels() { return &kAvx2; }

}  // namespace triage::simd

#else

namespace triage::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace triage::simd

#endif
