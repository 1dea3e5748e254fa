#include <array>
#include <complex>
#include <span>

#include "afc/kernels.hpp"
#include "kernels/simd_vec.hpp"

namespace afc::kernels::scalar {

#include "kernels/kernel_bodies.inl"

namespace {

void bloch_rk4(const BlochLanes& lanes, std::span<const FieldStep> steps, double h,
               DecayRates rates) {
  bloch_rk4_impl<simd::ScalarPack>(lanes, steps, h, rates);
}

std::complex<double> complex_dot(const double* wr, const double* wi, const double* sr,
                                 const double* si, std::size_t n) {
  return complex_dot_impl<simd::ScalarPack>(wr, wi, sr, si, n);
}

void spin_update(double* sr, double* si, const double* pr, const double* pi, const double* qar,
                 const double* qai, const double* qbr, const double* qbi, std::complex<double> ea,
                 std::complex<double> eb, std::size_t n) {
  spin_update_impl<simd::ScalarPack>(sr, si, pr, pi, qar, qai, qbr, qbi, ea, eb, n);
}

}  // namespace

const KernelTable table{Isa::scalar, &bloch_rk4, &complex_dot, &spin_update};

}  // namespace afc::kernels::scalar
