#include <array>
#include <complex>
#include <span>

#include "afc/kernels.hpp"
#include "kernels/simd_vec.hpp"

namespace afc::kernels::avx2 {

#include "kernels/kernel_bodies.inl"

namespace {

void bloch_rk4(const BlochLanes& lanes, std::span<const FieldStep> steps, double h,
               DecayRates rates) {
  bloch_rk4_impl<simd::Avx2Pack>(lanes, steps, h, rates);
}

std::complex<double> complex_dot(const double* wr, const double* wi, const double* sr,
                                 const double* si, std::size_t n) {
  return complex_dot_impl<simd::Avx2Pack>(wr, wi, sr, si, n);
}

void spin_update(double* sr, double* si, const double* pr, const double* pi, const double* qar,
                 const double* qai, const double* qbr, const double* qbi, std::complex<double> ea,
                 std::complex<double> eb, std::size_t n) {
  spin_update_impl<simd::Avx2Pack>(sr, si, pr, pi, qar, qai, qbr, qbi, ea, eb, n);
}

}  // namespace

const KernelTable table{Isa::avx2, &bloch_rk4, &complex_dot, &spin_update};

}  // namespace afc::kernels::avx2
