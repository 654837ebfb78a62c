#include "pforms/kernels.hpp"

#include <stdexcept>

namespace pforms::kern {

#if defined(__x86_64__)
void eis_term_sum_avx2(const EisBatch&, const EisPointCtx&, double out[4]);
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

TermSumFn select_kernel(const std::string& name, std::string* chosen) {
  auto pick_scalar = [&] {
    if (chosen) *chosen = "scalar";
    return &eis_term_sum_scalar;
  };
#if defined(__x86_64__)
  if (name == "avx2") {
    if (!cpu_has_avx2()) throw std::runtime_error("avx2 kernel requested but the CPU lacks AVX2/FMA");
    if (chosen) *chosen = "avx2";
    return &eis_term_sum_avx2;
  }
  if (name == "auto") {
    if (cpu_has_avx2()) {
      if (chosen) *chosen = "avx2";
      return &eis_term_sum_avx2;
    }
    return pick_scalar();
  }
#else
  if (name == "avx2") throw std::runtime_error("avx2 kernel not available on this architecture");
  if (name == "auto") return pick_scalar();
#endif
  if (name == "scalar") return pick_scalar();
  throw std::runtime_error("unknown kernel: " + name);
}

}  // namespace pforms::kern
