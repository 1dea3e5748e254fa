#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference build and,
// on x86-64, an AVX2/FMA build; `kernels()` picks one at runtime.
//
// Setting AFC_SIMD=scalar in the environment forces the reference kernels.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace afc::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Structure-of-arrays view over a batch of 3x3 density matrices, one lane
/// per velocity class. Only the upper triangle is stored; xij/yij are the
/// real/imaginary parts of ρij. `delta_p`, `delta_d` are per-lane
/// Doppler-shifted pump/dump detunings.
struct BlochLanes {
  double* r11 = nullptr;
  double* r22 = nullptr;
  double* r33 = nullptr;
  double* x12 = nullptr;
  double* y12 = nullptr;
  double* x13 = nullptr;
  double* y13 = nullptr;
  double* x23 = nullptr;
  double* y23 = nullptr;
  const double* delta_p = nullptr;
  const double* delta_d = nullptr;
  std::size_t n = 0;
};

/// Full Rabi frequencies at the start, midpoint and end of one RK4 step.
struct FieldStep {
  double p0, d0, pm, dm, p1, d1;
};

struct DecayRates {
  double gamma21 = 0.0;
  double gamma23 = 0.0;
};

struct KernelTable {
  Isa isa;
  /// Advance every lane through `steps.size()` classical RK4 steps of width h.
  void (*bloch_rk4)(const BlochLanes& lanes, std::span<const FieldStep> steps, double h,
                    DecayRates rates);
  /// Σ_k (wr_k + i wi_k)(sr_k + i si_k)
  std::complex<double> (*complex_dot)(const double* wr, const double* wi, const double* sr,
                                      const double* si, std::size_t n);
  /// s_k <- p_k s_k + qa_k ea + qb_k eb   (all complex)
  void (*spin_update)(double* sr, double* si, const double* pr, const double* pi,
                      const double* qar, const double* qai, const double* qbr, const double* qbi,
                      std::complex<double> ea, std::complex<double> eb, std::size_t n);
};

/// Kernels selected for this process (CPU feature probe + AFC_SIMD override).
const KernelTable& kernels();

/// A specific variant; throws std::runtime_error if it is not built or not
/// supported by the CPU.
const KernelTable& kernels_for(Isa isa);

bool isa_available(Isa isa);

namespace scalar {
extern const KernelTable table;
}
#if defined(AFC_HAVE_AVX2_KERNELS)
namespace avx2 {
extern const KernelTable table;
}
#endif

}  // namespace afc::kernels
