#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops of the matching and clustering stages. Every
// kernel has a scalar reference implementation; vector variants must produce
// bit-identical results and are picked at runtime from what the CPU reports.
// TRIAGE_SIMD=scalar|avx2|neon in the environment overrides the choice.
namespace triage::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // dst[i] = min(src[i], dst[i]); complete-linkage row update.
  void (*min_merge)(double* dst, const double* src, std::size_t n);
  // Index of the first maximum. n > 0.
  std::size_t (*argmax)(const double* values, std::size_t n);
  // dst[i] = dst[i] + weight * src[i], unfused.
  void (*axpy)(double* dst, const double* src, double weight, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled into this build.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool cpu_supports(Isa isa);

// Kernel table selected for this process (resolved once).
const KernelTable& active_kernels();

inline void min_merge(std::span<double> dst, std::span<const double> src,
                      const KernelTable& k = active_kernels()) {
  k.min_merge(dst.data(), src.data(), dst.size());
}

inline std::size_t argmax(std::span<const double> values,
                          const KernelTable& k = active_kernels()) {
  return k.argmax(values.data(), values.size());
}

inline void axpy(std::span<double> dst, std::span<const double> src, double weight,
                 const KernelTable& k = active_kernels()) {
  k.axpy(dst.data(), src.data(), weight, dst.size());
}

}  // namespace triage::simd
