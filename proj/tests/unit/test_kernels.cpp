#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "afc/bloch.hpp"
#include "afc/kernels.hpp"
#include "common.hpp"

using namespace afc;
namespace k = afc::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
  }
  return m;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("dispatch") {
  CHECK(k::isa_available(k::Isa::scalar));
  CHECK(k::kernels_for(k::Isa::scalar).isa == k::Isa::scalar);
  MESSAGE("selected kernels: " << k::to_string(k::kernels().isa));
}

TEST_CASE("bloch_rk4: AVX2 matches the scalar reference") {
  if (!k::isa_available(k::Isa::avx2)) {
    MESSAGE("AVX2 not available; skipped");
    return;
  }
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 3u, 4u, 13u, 64u}) {
    const std::size_t nfield = 9;
    std::vector<std::vector<double>> a(nfield), b;
    a[0] = std::vector<double>(n, 1.0);
    for (std::size_t f = 1; f < nfield; ++f) a[f] = random_vec(rng, n, -0.1, 0.1);
    b = a;
    const auto dp = random_vec(rng, n, -3.0, 3.0);
    const auto dd = random_vec(rng, n, -3.0, 3.0);
    std::vector<k::FieldStep> steps;
    for (int s = 0; s < 50; ++s) {
      const auto f = random_vec(rng, 6, 0.0, 2.0);
      steps.push_back({f[0], f[1], f[2], f[3], f[4], f[5]});
    }
    auto lanes = [&](std::vector<std::vector<double>>& x) {
      k::BlochLanes l;
      l.r11 = x[0].data();
      l.r22 = x[1].data();
      l.r33 = x[2].data();
      l.x12 = x[3].data();
      l.y12 = x[4].data();
      l.x13 = x[5].data();
      l.y13 = x[6].data();
      l.x23 = x[7].data();
      l.y23 = x[8].data();
      l.delta_p = dp.data();
      l.delta_d = dd.data();
      l.n = n;
      return l;
    };
    const k::DecayRates rates{0.3, 0.2};
    k::kernels_for(k::Isa::scalar).bloch_rk4(lanes(a), steps, 0.01, rates);
    k::kernels_for(k::Isa::avx2).bloch_rk4(lanes(b), steps, 0.01, rates);
    for (std::size_t f = 0; f < nfield; ++f) CHECK(max_rel(a[f], b[f]) < 1e-12);
  }
}

TEST_CASE("complex_dot and spin_update: AVX2 matches the scalar reference") {
  if (!k::isa_available(k::Isa::avx2)) return;
  std::mt19937_64 rng(11);
  const auto& s = k::kernels_for(k::Isa::scalar);
  const auto& v = k::kernels_for(k::Isa::avx2);
  for (std::size_t n : {0u, 1u, 5u, 8u, 1001u}) {
    const auto wr = random_vec(rng, n, -1, 1), wi = random_vec(rng, n, -1, 1);
    const auto sr = random_vec(rng, n, -1, 1), si = random_vec(rng, n, -1, 1);
    const auto ds = s.complex_dot(wr.data(), wi.data(), sr.data(), si.data(), n);
    const auto dv = v.complex_dot(wr.data(), wi.data(), sr.data(), si.data(), n);
    CHECK(std::abs(ds - dv) <= 1e-12 * std::max(1.0, static_cast<double>(n)));

    const auto pr = random_vec(rng, n, -1, 1), pi = random_vec(rng, n, -1, 1);
    const auto ar = random_vec(rng, n, -1, 1), ai = random_vec(rng, n, -1, 1);
    const auto br = random_vec(rng, n, -1, 1), bi = random_vec(rng, n, -1, 1);
    const std::complex<double> ea(0.3, -0.7), eb(-1.1, 0.25);
    auto xr = sr, xi = si, yr = sr, yi = si;
    s.spin_update(xr.data(), xi.data(), pr.data(), pi.data(), ar.data(), ai.data(), br.data(), bi.data(),
                  ea, eb, n);
    v.spin_update(yr.data(), yi.data(), pr.data(), pi.data(), ar.data(), ai.data(), br.data(), bi.data(),
                  ea, eb, n);
    CHECK(max_rel(xr, yr) < 1e-14);
    CHECK(max_rel(xi, yi) < 1e-14);
    // scalar reference against std::complex arithmetic
    for (std::size_t i = 0; i < n; ++i) {
      const std::complex<double> want = std::complex<double>(pr[i], pi[i]) * std::complex<double>(sr[i], si[i]) +
                                        std::complex<double>(ar[i], ai[i]) * ea +
                                        std::complex<double>(br[i], bi[i]) * eb;
      REQUIRE(std::abs(want - std::complex<double>(xr[i], xi[i])) < 1e-14);
    }
  }
}

TEST_CASE("velocity comb is the same with either kernel") {
  if (!k::isa_available(k::Isa::avx2)) return;
  const AtomicSystem sys = test::fig4_system();
  Drive d;
  d.train = test::fig4_train();
  d.pump_detuning0 = d.dump_detuning0 = test::two_pi * 360e6;
  std::vector<double> v;
  for (int i = 0; i < 23; ++i) v.push_back(-2.0 + 0.19 * i);
  BatchOptions a, b;
  a.kernel = &k::kernels_for(k::Isa::scalar);
  b.kernel = &k::kernels_for(k::Isa::avx2);
  const auto ra = evolve_batch(sys, d, v, a);
  const auto rb = evolve_batch(sys, d, v, b);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(std::abs(ra[i].population(2) - rb[i].population(2)) < 1e-10);
  }
}

}  // TEST_SUITE
