#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "afc/constants.hpp"
#include "afc/error.hpp"
#include "afc/stirapoz.hpp"
#include "common.hpp"

using namespace afc;
using afc::test::two_pi;

TEST_SUITE("stirapoz") {

TEST_CASE("optimal-zone curves at zero detuning") {
  const AtomicSystem s = test::fig4_system();
  const double rabi = two_pi * 151e6;
  const OzCurves oz = oz_curves(0.0, rabi, s);
  const double want = constants::c * rabi / (2.0 * std::sqrt(s.omega12 * s.omega13()));
  CHECK(oz.vs_plus == doctest::Approx(want).epsilon(1e-12));
  CHECK(oz.vs_minus == doctest::Approx(-want).epsilon(1e-12));
  CHECK_FALSE(oz.vp_plus.has_value());
  CHECK_FALSE(oz.vp_minus.has_value());
  CHECK(oz.contains(0.0));
  CHECK_FALSE(oz.contains(1.01 * want));
  CHECK_THROWS_AS(oz_curves(0.0, 0.0, s), DomainError);
}

TEST_CASE("threshold and the real/complex transition of Vp") {
  const AtomicSystem s = test::fig4_system();
  const double rabi = two_pi * 151e6;
  const OzCurves base = oz_curves(0.0, rabi, s);
  CHECK(base.threshold == doctest::Approx(std::sqrt(1.0 / 1.5)).epsilon(1e-12));
  CHECK(base.threshold == doctest::Approx(0.8165).epsilon(1e-4));

  const OzCurves at = oz_curves(base.threshold * rabi, rabi, s);
  REQUIRE(at.vp_plus.has_value());
  CHECK(*at.vp_plus == *at.vp_minus);

  for (double ratio : {0.3, 0.8, 0.8164, 0.8166, 1.0, 2.5}) {
    const OzCurves oz = oz_curves(ratio * rabi, rabi, s);
    CHECK(oz.vp_plus.has_value() == (ratio >= base.threshold));
    CHECK(oz.vs_plus >= oz.vs_minus);
    if (oz.vp_plus) {
      CHECK(*oz.vp_plus >= *oz.vp_minus);
      CHECK_FALSE(oz.contains(0.5 * (*oz.vp_plus + *oz.vp_minus)));
    }
  }
}

TEST_CASE("STIRAP widths, Fig. 4 parameters") {
  const AtomicSystem s = test::fig4_system();
  const double rabi = two_pi * 151e6, d0 = two_pi * 360e6;
  const StirapWidths w = stirap_widths(d0, rabi, s);
  CHECK(w.regime == OzRegime::above);
  CHECK(to_string(w.regime) == "above");
  CHECK(w.varpi / two_pi == doctest::Approx(10.55e6).epsilon(1e-3));
  CHECK(stirap_widths(2.0 * d0, rabi, s).varpi == doctest::Approx(0.5 * w.varpi).epsilon(1e-14));
  CHECK(std::abs(w.w_sp * s.omega34() / constants::c / w.varpi - 1.0) < 1e-12);
  CHECK(stirap_widths(0.5 * rabi, rabi, s).regime == OzRegime::below);
  CHECK_THROWS_AS(stirap_widths(0.0, rabi, s), DomainError);
}

TEST_CASE("PAP width from the STIRAP width") {
  const double factor = pap_width_from_stirap(1.0, 6.2e-9, 0.17e-6);
  CHECK(factor == doctest::Approx(0.0646).epsilon(1e-3));
  CHECK(pap_width_from_stirap(two_pi * 10.55e6, 6.2e-9, 0.17e-6) / two_pi ==
        doctest::Approx(0.682e6).epsilon(2e-3));
  const double t = 0.17e-6;
  CHECK(pap_width_from_stirap(3.0, t / std::sqrt(constants::pi), t) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(pap_width_from_stirap(3.0, 6.2e-9, 2.0 * t) ==
        doctest::Approx(0.5 * pap_width_from_stirap(3.0, 6.2e-9, t)).epsilon(1e-14));
  CHECK_THROWS_AS(pap_width_from_stirap(-1.0, 1e-9, 1e-7), DomainError);
}

TEST_CASE("composition with the closed-form tooth width") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    AtomicSystem s;
    s.omega32 = two_pi * (100e12 + 600e12 * u(rng));
    s.omega12 = s.omega32 * (1.2 + 2.0 * u(rng));
    s.omega42 = u(rng) < 0.5 ? 0.0 : s.omega32 + two_pi * (10e12 + 200e12 * u(rng));
    const double rabi = two_pi * (10e6 + 200e6 * u(rng));
    const double d0 = two_pi * (10e6 + 500e6 * u(rng));
    const double sigma = 1e-9 + 20e-9 * u(rng);
    const double t_int = 5.0 * sigma + 2e-6 * u(rng);
    const double chain = pap_width_from_stirap(stirap_widths(d0, rabi, s).varpi, sigma, t_int);
    const double eq13 = afc_metrics_analytic(rabi, sigma, t_int, d0, s).metrics.peak_fwhm;
    REQUIRE(std::abs(chain / eq13 - 1.0) < 1e-12);
  }
}

TEST_CASE("transfer map: symmetric at zero detuning, inside the zone") {
  const AtomicSystem s = test::fig4_system(0.0);
  const PulseTrain tr = test::fig4_train();
  const std::vector<double> ratios = {0.0};
  const auto v = default_oz_velocities(tr.peak_rabi(), s, 41);
  const OzMap map = oz_map(s, tr, ratios, v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(map.at(0, i) == doctest::Approx(map.at(0, v.size() - 1 - i)).epsilon(1e-9).scale(1.0));
  }
  CHECK(map.at(0, v.size() / 2) > 0.99);
  CHECK(map.containment(s) == 1.0);
}

TEST_CASE("transfer map without fields stays empty") {
  const AtomicSystem s = test::fig4_system(0.0);
  PulseTrain tr = test::fig4_train();
  tr.rabi_p0 = tr.rabi_d0 = two_pi * 1e3;
  const std::vector<double> ratios = {0.0, 1.0, 2.0};
  const std::vector<double> v = {-5.0, -1.0, 0.0, 1.0, 5.0};
  const OzMap map = oz_map(s, tr, ratios, v);
  for (double r : map.rho33) CHECK(r < 1e-3);
}

TEST_CASE("default axes and FWHM helper") {
  const auto r = default_oz_ratios();
  CHECK(r.size() == 61);
  CHECK(r.front() == 0.0);
  CHECK(r.back() == 3.0);
  const AtomicSystem s = test::fig4_system();
  const double rabi = two_pi * 151e6;
  const auto v = default_oz_velocities(rabi, s);
  const OzCurves oz = oz_curves(0.0, rabi, s);
  CHECK(v.back() - v.front() == doctest::Approx(1.5 * (oz.vs_plus - oz.vs_minus)));

  std::vector<double> x, y;
  for (int i = -200; i <= 200; ++i) {
    x.push_back(0.01 * i);
    y.push_back(std::exp(-0.5 * x.back() * x.back() / 0.09));
  }
  CHECK(profile_fwhm(x, y) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * 0.3).epsilon(1e-3));
  std::vector<double> edge(y.size(), 1.0);
  CHECK_THROWS_AS(profile_fwhm(x, edge), NumericalError);
}

}  // TEST_SUITE
