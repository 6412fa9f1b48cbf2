#include <cstdlib>
#include <string>

#include "triage/simd/kernels.hpp"

namespace triage::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "scalar";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
      // Advanced SIMD is mandatory on AArch64.
      return neon_kernels() != nullptr;
  }
  return false;
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("TRIAGE_SIMD")) {
    std::string want(forced);
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2" && cpu_supports(Isa::kAvx2)) return *avx2_kernels();
    if (want == "neon" && cpu_supports(Isa::kNeon)) return *neon_kernels();
  }
  if (cpu_supports(Isa::kAvx2)) return *avx2_kernels();
  if (cpu_supports(Isa::kNeon)) return *neon_kernels();
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace triage::simd
