#include <doctest.h>

#include <cmath>
#include <vector>

#include "afc/constants.hpp"
#include "afc/error.hpp"
#include "afc/model.hpp"
#include "common.hpp"

using namespace afc;
using afc::test::two_pi;

TEST_SUITE("model") {

TEST_CASE("maxwell_boltzmann peak, symmetry and normalisation") {
  GasParameters gas;
  gas.density = 1.0;
  gas.eta_override = 350.0;
  CHECK(maxwell_boltzmann(0.0, gas) == doctest::Approx(1.1398e-3).epsilon(1e-4));
  for (double v : {0.3, 12.0, 401.5}) CHECK(maxwell_boltzmann(v, gas) == maxwell_boltzmann(-v, gas));

  // [-6η, 6η], 10^5 points
  const VelocityGrid grid(-6.0 * 350.0, 6.0 * 350.0, 100000);
  const auto f = maxwell_boltzmann(grid, gas);
  CHECK(std::abs(trapezoid(f, grid.spacing()) - 1.0) < 1e-8);

  // 10^4 points is the property-suite gate
  const VelocityGrid coarse(-6.0 * 350.0, 6.0 * 350.0, 10000);
  CHECK(std::abs(trapezoid(maxwell_boltzmann(coarse, gas), coarse.spacing()) - 1.0) < 1e-6);
}

TEST_CASE("gas eta from temperature and mass") {
  GasParameters gas;
  gas.temperature = 1073.15;
  gas.atomic_mass = 137.327 * constants::amu;
  gas.density = 2.5e20;
  CHECK(gas.eta() == doctest::Approx(std::sqrt(constants::k_b * 1073.15 / gas.atomic_mass)));
  gas.density = 0.0;
  CHECK_THROWS_AS(gas.validate(), DomainError);
}

TEST_CASE("doppler detunings") {
  const double wp = two_pi * 1592.5e12;
  const double wd = two_pi * 637e12;
  auto d = doppler_detunings(0.0, 1.0, 2.0, wp, wd);
  CHECK(d.pump == 1.0);
  CHECK(d.dump == 2.0);
  d = doppler_detunings(300.0, 0.0, 0.0, wp, wd);
  CHECK(d.pump / two_pi == doctest::Approx(1.593e9).epsilon(1e-3));
  const auto d1 = doppler_detunings(7.0, 5.0, 5.0, wp, wd);
  const auto d2 = doppler_detunings(14.0, 5.0, 5.0, wp, wd);
  CHECK(d2.pump - 5.0 == doctest::Approx(2.0 * (d1.pump - 5.0)).epsilon(1e-14));
}

TEST_CASE("v_two_photon") {
  const double w13 = two_pi * 955.5e12;
  CHECK(v_two_photon(0, two_pi / 0.17e-6, w13) == 0.0);
  CHECK(v_two_photon(1, two_pi / 0.17e-6, w13) == doctest::Approx(1.847).epsilon(1e-3));
  CHECK(v_two_photon(1, two_pi / 0.7e-6, w13) == doctest::Approx(0.449).epsilon(2e-3));
  CHECK_THROWS_AS(v_two_photon(1, 1.0, 0.0), DomainError);
}

TEST_CASE("analytic metrics, Fig. 4 parameters") {
  const AtomicSystem s = test::fig4_system();
  const auto a = afc_metrics_analytic(two_pi * 151e6, 6.2e-9, 0.17e-6, two_pi * 360e6, s);
  const auto& m = a.metrics;
  CHECK(m.gamma / two_pi == doctest::Approx(24.19e6).epsilon(0.01));
  CHECK(m.delta_sep / two_pi == doctest::Approx(3.91e6).epsilon(0.01));
  CHECK(m.peak_fwhm / two_pi == doctest::Approx(0.684e6).epsilon(0.01));
  CHECK(std::abs(m.finesse / 5.72 - 1.0) < 0.01);
  CHECK(std::abs(m.n_peaks - 30.9) < 0.1);
  CHECK(a.fwhm_valid);
  // F·ϖ = Δδ and T̃·Δδ = 2π
  CHECK(std::abs(m.finesse * m.peak_fwhm / m.delta_sep - 1.0) < 1e-12);
  CHECK(std::abs(m.retrieval_time * m.delta_sep / two_pi - 1.0) < 1e-12);
  // 𝓕 = 8√π Δ0/(Ω0² σ)
  const double direct = 8.0 * std::sqrt(constants::pi) * two_pi * 360e6 /
                        (std::pow(two_pi * 151e6, 2) * 6.2e-9);
  CHECK(std::abs(m.finesse / direct - 1.0) < 1e-12);
}

TEST_CASE("analytic metrics, Ba parameters") {
  const AtomicSystem s = test::ba_system();
  // ξ = 65.35/340 = 0.1922, printed as 0.19 (1.2% apart)
  CHECK(std::abs(s.xi() - 65.35 / 340.0) < 1e-12);
  CHECK(std::abs(s.xi() / 0.19 - 1.0) < 0.02);
  CHECK(std::abs(s.r() / 2.7 - 1.0) < 1e-12);
  const auto a = afc_metrics_analytic(two_pi * 51.72e6, 10.77e-9, 689e-9, two_pi * 129.35e6, s);
  CHECK(a.metrics.delta_sep / two_pi == doctest::Approx(0.28e6).epsilon(0.01));
  CHECK(a.metrics.retrieval_time == doctest::Approx(3.6e-6).epsilon(0.01));
}

TEST_CASE("analytic metrics reject nonpositive input") {
  const AtomicSystem s = test::fig4_system();
  CHECK_THROWS_AS(afc_metrics_analytic(0.0, 1e-9, 1e-7, 1e9, s), DomainError);
  CHECK_THROWS_AS(afc_metrics_analytic(1e9, -1e-9, 1e-7, 1e9, s), DomainError);
  CHECK_THROWS_AS(afc_metrics_analytic(1e9, 1e-9, 0.0, 1e9, s), DomainError);
  CHECK_THROWS_AS(afc_metrics_analytic(1e9, 1e-9, 1e-7, 0.0, s), DomainError);
}

TEST_CASE("tooth order maps onto n·Δδ") {
  const AtomicSystem s = test::fig4_system();
  const double t_int = 0.17e-6;
  const auto a = afc_metrics_analytic(two_pi * 151e6, 6.2e-9, t_int, two_pi * 360e6, s);
  for (int n : {1, 2, 7}) {
    const double v = v_two_photon(n, two_pi / t_int, s.omega13());
    const double delta = s.omega34() * v / constants::c;
    CHECK(std::abs(delta / (n * a.metrics.delta_sep) - 1.0) < 1e-12);
  }
}

TEST_CASE("design conditions") {
  const AtomicSystem s = test::ba_system();
  const auto d = design_conditions(two_pi * 51.72e6, 10.77e-9, two_pi * 129.35e6, s);
  CHECK(d.finesse_parameter == doctest::Approx(1.40).epsilon(0.01));
  CHECK(d.finesse_ok);
  CHECK(d.ratio_ok);

  AtomicSystem eq = s;  // ω34 = ω13
  eq.omega42 = eq.omega32 + eq.omega13();
  CHECK_FALSE(design_conditions(two_pi * 51.72e6, 10.77e-9, two_pi * 129.35e6, eq).ratio_ok);
  const auto a = afc_metrics_analytic(two_pi * 51.72e6, 10.77e-9, 689e-9, two_pi * 129.35e6, eq);
  CHECK(a.metrics.retrieval_time == doctest::Approx(689e-9).epsilon(1e-12));
}

TEST_CASE("atomic system invariants") {
  AtomicSystem s = test::fig4_system();
  CHECK_NOTHROW(s.validate());
  s.omega12 = s.omega32;  // degenerate ground states
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = test::fig4_system();
  s.gamma21 = -1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  CHECK(test::fig4_system().gamma() == doctest::Approx(0.5e7));
}

TEST_CASE("velocity grid") {
  const VelocityGrid g(-1.0, 1.0, 5);
  CHECK(g.size() == 5);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g[0] == -1.0);
  CHECK(g[4] == 1.0);
  CHECK_THROWS_AS(VelocityGrid(0.0, 1.0, 2), DomainError);
  CHECK_THROWS_AS(VelocityGrid(1.0, 0.0, 10), DomainError);
}

}  // TEST_SUITE
