#include "cakemech/kernels.hpp"

#include <cstdlib>
#include <string>

#include "cakemech/errors.hpp"

namespace cake::kernels {

// Defined in kernels_avx2.cpp (nullptr when that TU was built without AVX2).
const Ops* avx2_ops_table();

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return avx2_ops_table();
#endif
  return nullptr;
}

const Ops& active_ops() {
  static const Ops& chosen = []() -> const Ops& {
    const char* env = std::getenv("CAKEMECH_KERNELS");
    const std::string pick = env ? env : "auto";
    if (pick == "scalar") return scalar_ops();
    const Ops* simd = avx2_ops();
    if (pick == "avx2") {
      if (simd == nullptr) {
        throw DomainError("CAKEMECH_KERNELS=avx2 but AVX2 is unavailable here");
      }
      return *simd;
    }
    return simd != nullptr ? *simd : scalar_ops();
  }();
  return chosen;
}

}  // namespace cake::kernels
