#pragma once

// Minimal lane abstraction for the kernel bodies in *.inl. A "pack" type
// provides load/store/broadcast/fma and the arithmetic operators.

#include <cstddef>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace afc::kernels::simd {

struct ScalarPack {
  static constexpr std::size_t width = 1;
  using V = double;
  static V load(const double* p) { return *p; }
  static void store(double* p, V v) { *p = v; }
  static V set1(double x) { return x; }
  static V fma(V a, V b, V c) { return a * b + c; }
};

#if defined(__AVX2__) && defined(__FMA__)
struct Avx2Pack {
  static constexpr std::size_t width = 4;
  struct V {
    __m256d v;
    V() = default;
    V(__m256d x) : v(x) {}
    friend V operator+(V a, V b) { return _mm256_add_pd(a.v, b.v); }
    friend V operator-(V a, V b) { return _mm256_sub_pd(a.v, b.v); }
    friend V operator*(V a, V b) { return _mm256_mul_pd(a.v, b.v); }
    friend V operator-(V a) { return _mm256_xor_pd(a.v, _mm256_set1_pd(-0.0)); }
  };
  static V load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, V v) { _mm256_storeu_pd(p, v.v); }
  static V set1(double x) { return _mm256_set1_pd(x); }
  static V fma(V a, V b, V c) { return _mm256_fmadd_pd(a.v, b.v, c.v); }
};
#endif

}  // namespace afc::kernels::simd
