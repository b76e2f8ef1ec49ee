#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "logevo/error.hpp"

namespace logevo::kernels {

const KernelTable* avx2_kernels() {
#if defined(LOGEVO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("LOGEVO_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return scalar_kernels();
  if (choice == "avx2") {
    if (const KernelTable* t = avx2_kernels()) return *t;
    throw UnsupportedError("LOGEVO_SIMD=avx2 but the AVX2/FMA kernels are not available");
  }
  if (choice == "auto" || choice.empty()) {
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }
  throw DomainError("LOGEVO_SIMD must be scalar, avx2 or auto, got '" + choice + "'");
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace logevo::kernels
