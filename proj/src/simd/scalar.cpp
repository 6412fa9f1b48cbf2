#include "triage/simd/kernels.hpp"

namespace triage::simd {
namespace {

void min_merge_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = src[i] < dst[i] ? src[i] : dst[i];
  }
}

std::size_t argmax_scalar(const double* values, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

void axpy_scalar(double* dst, const double* src, double weight, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double product = weight * src[i];
    dst[i] = dst[i] + product;
  }
}

constexpr KernelTable kScalar{Isa::kScalar, &min_merge_scalar, &argmax_scalar,
                              &axpy_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace triage::simd
