// Kernel bodies shared by the scalar and AVX2 builds. Included inside a
// per-ISA namespace (afc::kernels::scalar / afc::kernels::avx2) so each
// translation unit owns distinct symbols. Requires simd_vec.hpp, <array>,
// <complex>, <span> and kernels.hpp to be included first.

template <class P>
struct BlochState {
  using V = typename P::V;
  V r11, r22, r33, x12, y12, x13, y13, x23, y23;
};

// Right-hand side of the Λ-system master equation in the rotating frame:
//   H = -Δp|2><2| - (Δp-Δd)|3><3| + (Ωp/2)(|1><2|+h.c.) + (Ωd/2)(|3><2|+h.c.)
// with spontaneous decay |2>->|1> (γ21) and |2>->|3> (γ23).
template <class P>
inline BlochState<P> bloch_rhs(const BlochState<P>& s, typename P::V dp, typename P::V dd,
                               typename P::V a, typename P::V b, typename P::V g21,
                               typename P::V g23, typename P::V half_g) {
  using V = typename P::V;
  const V two = P::set1(2.0);
  const V g = g21 + g23;
  const V d2 = -dp;     // energy of |2>
  const V d3 = dd - dp; // energy of |3>
  const V pop = s.r22 - s.r11;
  BlochState<P> o;
  o.r11 = P::fma(g21, s.r22, -(two * a * s.y12));
  o.r33 = P::fma(g23, s.r22, two * b * s.y23);
  o.r22 = two * (a * s.y12 - b * s.y23) - g * s.r22;
  o.x12 = -(d2 * s.y12) - b * s.y13 - half_g * s.x12;
  o.y12 = P::fma(d2, s.x12, b * s.x13) - a * pop - half_g * s.y12;
  o.x13 = a * s.y23 - b * s.y12 - d3 * s.y13;
  o.y13 = P::fma(b, s.x12, d3 * s.x13) - a * s.x23;
  o.x23 = a * s.y13 - dd * s.y23 - half_g * s.x23;
  o.y23 = P::fma(dd, s.x23, -(a * s.x13)) - b * (s.r33 - s.r22) - half_g * s.y23;
  return o;
}

template <class P>
inline BlochState<P> axpy(const BlochState<P>& x, typename P::V h, const BlochState<P>& k) {
  BlochState<P> o;
  o.r11 = P::fma(h, k.r11, x.r11);
  o.r22 = P::fma(h, k.r22, x.r22);
  o.r33 = P::fma(h, k.r33, x.r33);
  o.x12 = P::fma(h, k.x12, x.x12);
  o.y12 = P::fma(h, k.y12, x.y12);
  o.x13 = P::fma(h, k.x13, x.x13);
  o.y13 = P::fma(h, k.y13, x.y13);
  o.x23 = P::fma(h, k.x23, x.x23);
  o.y23 = P::fma(h, k.y23, x.y23);
  return o;
}

template <class P>
inline void bloch_rk4_chunk(const BlochLanes& L, std::size_t i, std::span<const FieldStep> steps,
                            double h, DecayRates rates) {
  using V = typename P::V;
  BlochState<P> s{P::load(L.r11 + i), P::load(L.r22 + i), P::load(L.r33 + i),
                  P::load(L.x12 + i), P::load(L.y12 + i), P::load(L.x13 + i),
                  P::load(L.y13 + i), P::load(L.x23 + i), P::load(L.y23 + i)};
  const V dp = P::load(L.delta_p + i);
  const V dd = P::load(L.delta_d + i);
  const V g21 = P::set1(rates.gamma21);
  const V g23 = P::set1(rates.gamma23);
  const V half_g = P::set1(0.5 * (rates.gamma21 + rates.gamma23));
  const V hv = P::set1(h);
  const V h2 = P::set1(0.5 * h);
  const V h6 = P::set1(h / 6.0);
  const V two = P::set1(2.0);
  for (const FieldStep& f : steps) {
    const V a0 = P::set1(0.5 * f.p0), b0 = P::set1(0.5 * f.d0);
    const V am = P::set1(0.5 * f.pm), bm = P::set1(0.5 * f.dm);
    const V a1 = P::set1(0.5 * f.p1), b1 = P::set1(0.5 * f.d1);
    const BlochState<P> k1 = bloch_rhs<P>(s, dp, dd, a0, b0, g21, g23, half_g);
    const BlochState<P> k2 = bloch_rhs<P>(axpy<P>(s, h2, k1), dp, dd, am, bm, g21, g23, half_g);
    const BlochState<P> k3 = bloch_rhs<P>(axpy<P>(s, h2, k2), dp, dd, am, bm, g21, g23, half_g);
    const BlochState<P> k4 = bloch_rhs<P>(axpy<P>(s, hv, k3), dp, dd, a1, b1, g21, g23, half_g);
#define AFC_RK4_COMBINE(f) \
  s.f = P::fma(h6, k1.f + k4.f + two * (k2.f + k3.f), s.f)
    AFC_RK4_COMBINE(r11);
    AFC_RK4_COMBINE(r22);
    AFC_RK4_COMBINE(r33);
    AFC_RK4_COMBINE(x12);
    AFC_RK4_COMBINE(y12);
    AFC_RK4_COMBINE(x13);
    AFC_RK4_COMBINE(y13);
    AFC_RK4_COMBINE(x23);
    AFC_RK4_COMBINE(y23);
#undef AFC_RK4_COMBINE
  }
  P::store(L.r11 + i, s.r11);
  P::store(L.r22 + i, s.r22);
  P::store(L.r33 + i, s.r33);
  P::store(L.x12 + i, s.x12);
  P::store(L.y12 + i, s.y12);
  P::store(L.x13 + i, s.x13);
  P::store(L.y13 + i, s.y13);
  P::store(L.x23 + i, s.x23);
  P::store(L.y23 + i, s.y23);
}

template <class P>
void bloch_rk4_impl(const BlochLanes& lanes, std::span<const FieldStep> steps, double h,
                    DecayRates rates) {
  std::size_t i = 0;
  for (; i + P::width <= lanes.n; i += P::width) bloch_rk4_chunk<P>(lanes, i, steps, h, rates);
  for (; i < lanes.n; ++i) bloch_rk4_chunk<simd::ScalarPack>(lanes, i, steps, h, rates);
}

template <class P>
std::complex<double> complex_dot_impl(const double* wr, const double* wi, const double* sr,
                                      const double* si, std::size_t n) {
  using V = typename P::V;
  V acc_r = P::set1(0.0);
  V acc_i = P::set1(0.0);
  std::size_t k = 0;
  for (; k + P::width <= n; k += P::width) {
    const V a = P::load(wr + k), b = P::load(wi + k);
    const V c = P::load(sr + k), d = P::load(si + k);
    acc_r = P::fma(a, c, acc_r);
    acc_r = P::fma(-b, d, acc_r);
    acc_i = P::fma(a, d, acc_i);
    acc_i = P::fma(b, c, acc_i);
  }
  std::array<double, P::width> lr{}, li{};
  P::store(lr.data(), acc_r);
  P::store(li.data(), acc_i);
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < P::width; ++j) {
    re += lr[j];
    im += li[j];
  }
  for (; k < n; ++k) {
    re += wr[k] * sr[k] - wi[k] * si[k];
    im += wr[k] * si[k] + wi[k] * sr[k];
  }
  return {re, im};
}

template <class P>
void spin_update_impl(double* sr, double* si, const double* pr, const double* pi,
                      const double* qar, const double* qai, const double* qbr, const double* qbi,
                      std::complex<double> ea, std::complex<double> eb, std::size_t n) {
  using V = typename P::V;
  const V ear = P::set1(ea.real()), eai = P::set1(ea.imag());
  const V ebr = P::set1(eb.real()), ebi = P::set1(eb.imag());
  std::size_t k = 0;
  for (; k + P::width <= n; k += P::width) {
    const V s_r = P::load(sr + k), s_i = P::load(si + k);
    const V p_r = P::load(pr + k), p_i = P::load(pi + k);
    const V a_r = P::load(qar + k), a_i = P::load(qai + k);
    const V b_r = P::load(qbr + k), b_i = P::load(qbi + k);
    V out_r = p_r * s_r - p_i * s_i;
    V out_i = p_r * s_i + p_i * s_r;
    out_r = P::fma(a_r, ear, out_r);
    out_r = P::fma(-a_i, eai, out_r);
    out_i = P::fma(a_r, eai, out_i);
    out_i = P::fma(a_i, ear, out_i);
    out_r = P::fma(b_r, ebr, out_r);
    out_r = P::fma(-b_i, ebi, out_r);
    out_i = P::fma(b_r, ebi, out_i);
    out_i = P::fma(b_i, ebr, out_i);
    P::store(sr + k, out_r);
    P::store(si + k, out_i);
  }
  for (; k < n; ++k) {
    const double s_r = sr[k], s_i = si[k];
    double out_r = pr[k] * s_r - pi[k] * s_i;
    double out_i = pr[k] * s_i + pi[k] * s_r;
    out_r += qar[k] * ea.real() - qai[k] * ea.imag() + qbr[k] * eb.real() - qbi[k] * eb.imag();
    out_i += qar[k] * ea.imag() + qai[k] * ea.real() + qbr[k] * eb.imag() + qbi[k] * eb.real();
    sr[k] = out_r;
    si[k] = out_i;
  }
}
