#include <cstdlib>
#include <stdexcept>
#include <string>

#include "afc/kernels.hpp"

namespace afc::kernels {

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(AFC_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::runtime_error("kernel variant not available: " + std::string(to_string(isa)));
  }
#if defined(AFC_HAVE_AVX2_KERNELS)
  if (isa == Isa::avx2) return avx2::table;
#endif
  return scalar::table;
}

const KernelTable& kernels() {
  static const KernelTable& selected = [] () -> const KernelTable& {
    const char* env = std::getenv("AFC_SIMD");
    if (env != nullptr && std::string(env) == "scalar") return scalar::table;
    if (isa_available(Isa::avx2)) return kernels_for(Isa::avx2);
    return scalar::table;
  }();
  return selected;
}

}  // namespace afc::kernels
