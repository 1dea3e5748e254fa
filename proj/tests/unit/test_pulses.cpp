#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "afc/error.hpp"
#include "afc/pulses.hpp"
#include "common.hpp"

using namespace afc;
using afc::test::two_pi;

namespace {

std::vector<double> uniform(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

// ∫ f(t) e^{iωt} dt by the trapezoid rule on dense samples.
std::complex<double> direct_transform(const std::vector<double>& t, const std::vector<double>& f, double w) {
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double wt = (i == 0 || i + 1 == t.size()) ? 0.5 : 1.0;
    sum += wt * f[i] * std::polar(1.0, w * t[i]);
  }
  return sum * (t[1] - t[0]);
}

}  // namespace

TEST_SUITE("pulses") {

TEST_CASE("train samples at the pulse centres") {
  const PulseTrain tr = test::fig4_train();
  CHECK(tr.tau() == doctest::Approx(2.55e-6));
  CHECK(omega_d(0.0, tr) == doctest::Approx(tr.rabi_d0).epsilon(1e-12));
  CHECK(omega_p(tr.tau(), tr) == doctest::Approx(tr.rabi_p0).epsilon(1e-12));
  // e^{-τ²/2σe²} = e^{-4 ln 2}
  CHECK(omega_p(0.0, tr) / omega_d(0.0, tr) == doctest::Approx(0.0625).epsilon(1e-12));
  // midway between sub-pulses the field is negligible
  CHECK(omega_d(0.5 * tr.t_int, tr) < 1e-30 * tr.rabi_d0);
}

TEST_CASE("trains are nonnegative and bounded") {
  const PulseTrain tr = test::fig4_train();
  for (double t = -2e-6; t < tr.tau() + 2e-6; t += 0.37e-9) {
    const double p = omega_p(t, tr), d = omega_d(t, tr);
    REQUIRE(p >= 0.0);
    REQUIRE(d >= 0.0);
    REQUIRE(p <= tr.rabi_p0 * (1.0 + 1e-12));
    REQUIRE(d <= tr.rabi_d0 * (1.0 + 1e-12));
  }
}

TEST_CASE("mixing angle and dark state") {
  CHECK(mixing_angle(0.0, 1.0) == 0.0);
  CHECK(mixing_angle(2.0, 2.0) == doctest::Approx(std::numbers::pi / 4));
  CHECK_THROWS_AS(mixing_angle(0.0, 0.0), DomainError);

  const PulseTrain tr = test::fig4_train();
  double prev = -1.0;
  for (int l = 0; l < tr.n_pulses; ++l) {
    const double th = mixing_angle(l * tr.t_int, tr);
    CHECK(th > prev);
    prev = th;
  }
  CHECK(mixing_angle(0.0, tr) < 0.07);
  CHECK(mixing_angle(tr.tau(), tr) > std::numbers::pi / 2 - 0.07);

  const auto [c1, c3] = dark_state(0.0, tr);
  CHECK(c1 * c1 + c3 * c3 == doctest::Approx(1.0));
  CHECK(c1 > 0.99);
  CHECK(c3 <= 0.0);
}

TEST_CASE("global adiabaticity") {
  const auto a = check_adiabaticity(test::fig4_train());
  CHECK(a.area == doctest::Approx(3.4e3).epsilon(0.01));
  CHECK(a.ok);

  // τ = 0.5 keeps the boundary arithmetic exact
  PulseTrain edge = PulseTrain::make(0.0, 2, 0.5, 0.01);
  edge.rabi_p0 = 2.0 * (10.0 * std::numbers::pi / std::sqrt(2.0));
  const auto e = check_adiabaticity(edge);
  CHECK(e.area == 10.0 * std::numbers::pi / std::sqrt(2.0));
  CHECK_FALSE(e.ok);

  CHECK_FALSE(check_adiabaticity(PulseTrain::make(1e-3, 16, 0.17e-6, 6.2e-9)).ok);
}

TEST_CASE("train validation") {
  CHECK_THROWS_AS(PulseTrain::make(1.0, 1, 1e-7, 1e-9).validate(), DomainError);
  CHECK_THROWS_AS(PulseTrain::make(1.0, 4, 1e-7, 0.3e-7).validate(), DomainError);
  CHECK_NOTHROW(test::fig4_train().validate());
}

TEST_CASE("OFC spectrum: value at zero, tooth positions, grid check") {
  const PulseTrain tr = test::fig4_train();
  const double tooth = two_pi / tr.t_int;

  double sum_n = 0.0;
  for (int n = 0; n < tr.n_pulses; ++n) {
    const double off = n * tr.t_int;
    sum_n += std::exp(-off * off / (2.0 * tr.sigma_e * tr.sigma_e));
  }
  const std::vector<double> zero = {0.0, tooth / 32.0};
  const auto s0 = ofc_spectrum(tr, Field::dump, zero);
  CHECK(std::abs(s0.amplitudes[0]) == doctest::Approx(tr.sigma * tr.rabi_d0 * sum_n).epsilon(1e-12));
  CHECK(s0.envelope_bandwidth == doctest::Approx(1.0 / tr.sigma));

  const std::size_t bins = 32;
  const auto grid = uniform(-6.0 * tooth, 6.0 * tooth, 12 * bins + 1);
  const auto s = ofc_spectrum(tr, Field::pump, grid);
  double global = 0.0;
  for (const auto& a : s.amplitudes) global = std::max(global, std::abs(a));
  CHECK(std::abs(s.amplitudes[6 * bins]) == doctest::Approx(global));
  for (int k = -5; k <= 5; ++k) {
    // argmax within half a tooth of k·2π/T_int
    const std::size_t c = static_cast<std::size_t>(static_cast<long>(6 + k) * static_cast<long>(bins));
    std::size_t best = c - bins / 2;
    for (std::size_t i = c - bins / 2; i <= c + bins / 2; ++i) {
      if (std::abs(s.amplitudes[i]) > std::abs(s.amplitudes[best])) best = i;
    }
    CHECK(std::abs(grid[best] - k * tooth) <= grid[1] - grid[0]);
  }

  const auto coarse = uniform(0.0, tooth, 10);
  CHECK_THROWS_AS(ofc_spectrum(tr, Field::pump, coarse), DomainError);
}

TEST_CASE("OFC tooth height grows with N") {
  double prev = 0.0;
  for (int n : {4, 8, 16}) {
    const PulseTrain tr = PulseTrain::make(two_pi * 151e6, n, 0.17e-6, 6.2e-9);
    const double tooth = two_pi / tr.t_int;
    const std::vector<double> w = {tooth, tooth * (1.0 + 1.0 / 32.0)};
    const double h = std::abs(ofc_spectrum(tr, Field::dump, w).amplitudes[0]);
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("OFC spectrum matches a direct transform of the sampled train") {
  const PulseTrain tr = test::fig4_train();
  const double tooth = two_pi / tr.t_int;
  const auto t = uniform(-6.0 * tr.sigma_e, tr.tau() + 6.0 * tr.sigma_e, 40001);
  for (Field which : {Field::pump, Field::dump}) {
    std::vector<double> f(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) f[i] = which == Field::pump ? omega_p(t[i], tr) : omega_d(t[i], tr);
    // Ω̃ is the unitary transform: (2π)^{-1/2} ∫ Ω(t) e^{iωt} dt
    for (int k = 0; k <= 4; ++k) {
      const std::vector<double> pair = {k * tooth, k * tooth + tooth / 32.0};
      const auto s = ofc_spectrum(tr, which, pair);
      const auto d = direct_transform(t, f, k * tooth) / std::sqrt(two_pi);
      CHECK(std::abs(s.amplitudes[0] - d) < 0.01 * std::abs(d));
    }
  }
}

TEST_CASE("Parseval: time-domain energy equals spectral energy, no 1/2π") {
  const PulseTrain tr = test::fig4_train();
  const auto t = uniform(-6.0 * tr.sigma_e, tr.tau() + 6.0 * tr.sigma_e, 200001);
  double e_t = 0.0;
  for (double ti : t) e_t += std::pow(omega_d(ti, tr), 2);
  e_t *= t[1] - t[0];

  const double tooth = two_pi / tr.t_int;
  const double span = 7.0 / tr.sigma;
  const auto n = static_cast<std::size_t>(2.0 * span / (tooth / 256.0)) + 1;
  const auto w = uniform(-span, span, n);
  const auto s = ofc_spectrum(tr, Field::dump, w);
  double e_w = 0.0;
  for (const auto& a : s.amplitudes) e_w += std::norm(a);
  e_w *= w[1] - w[0];
  CHECK(e_w == doctest::Approx(e_t).epsilon(0.01));
}

TEST_CASE("harmonic matching") {
  const PulseTrain tr = test::fig4_train();
  const AtomicSystem s = test::fig4_system();
  const double d0 = two_pi * 360e6;
  CHECK(harmonic_match(0.0, 0, 0, tr, s, d0, d0, kDefaultHarmonicTolerance).resonant);
  CHECK_FALSE(harmonic_match(0.0, 0, 1, tr, s, d0, d0, kDefaultHarmonicTolerance).resonant);

  const double v1 = v_two_photon(1, two_pi / tr.t_int, s.omega13());
  for (auto [n, m] : {std::pair{0, 1}, {3, 4}, {-2, -1}}) {
    CHECK(harmonic_match(v1, n, m, tr, s, d0, d0, kDefaultHarmonicTolerance).resonant);
  }
  CHECK_FALSE(harmonic_match(v1, 0, 0, tr, s, d0, d0, kDefaultHarmonicTolerance).resonant);

  // degenerate ground states: both fields see the same Doppler shift
  AtomicSystem deg = s;
  deg.omega12 = deg.omega32;
  CHECK(harmonic_match(0.0, 2, 2, tr, deg, d0, d0, kDefaultHarmonicTolerance).resonant);
  for (double v : {0.0, v1, 50.0}) {
    CHECK_FALSE(harmonic_match(v, 0, 1, tr, deg, d0, d0, kDefaultHarmonicTolerance).resonant);
  }
}

}  // TEST_SUITE
