#include "afc/stirapoz.hpp"

#include <algorithm>
#include <cmath>

#include "afc/constants.hpp"
#include "afc/error.hpp"

namespace afc {

bool OzCurves::contains(double v) const {
  if (v < vs_minus || v > vs_plus) return false;
  if (vp_plus && vp_minus && v > *vp_minus && v < *vp_plus) return false;
  return true;
}

OzCurves oz_curves(double detuning0, double rabi0, const AtomicSystem& system) {
  if (!(rabi0 > 0.0)) throw DomainError("Rabi frequency must be positive");
  const double w12 = system.omega12;
  const double w32 = system.omega32;
  const double w13 = system.omega13();
  if (!(w13 > 0.0)) throw DomainError("optimal zone needs omega13 > 0");
  const double d2 = detuning0 * detuning0;
  const double r2 = rabi0 * rabi0;

  OzCurves out;
  out.threshold = std::sqrt(w32 / w13);
  const double root_s = std::sqrt(w13 * (d2 * w13 + r2 * w12));
  const double ks = constants::c / (2.0 * w12 * w13);
  out.vs_plus = ks * (root_s - w13 * detuning0);
  out.vs_minus = ks * (-root_s - w13 * detuning0);

  double disc = w13 * (d2 * w13 - r2 * w32);
  // |Δ0|/Ω0 at the threshold up to rounding: a double root, not a complex pair
  if (disc < 0.0 && -disc <= 1e-12 * w13 * (d2 * w13 + r2 * w32)) disc = 0.0;
  if (disc >= 0.0) {
    const double root_p = std::sqrt(disc);
    const double kp = constants::c / (2.0 * w32 * w13);
    out.vp_plus = kp * (root_p - w13 * detuning0);
    out.vp_minus = kp * (-root_p - w13 * detuning0);
  }
  return out;
}

std::string_view to_string(OzRegime r) { return r == OzRegime::above ? "above" : "below"; }

StirapWidths stirap_widths(double detuning0, double rabi0, const AtomicSystem& system) {
  if (!(rabi0 > 0.0) || !(detuning0 > 0.0)) {
    throw DomainError("stirap widths need positive detuning and Rabi frequency");
  }
  const OzCurves oz = oz_curves(detuning0, rabi0, system);
  StirapWidths out;
  out.regime = detuning0 / rabi0 > oz.threshold ? OzRegime::above : OzRegime::below;
  if (out.regime == OzRegime::above && oz.vp_plus) {
    out.width_v = 0.5 * (oz.vs_plus - *oz.vp_plus);
  } else {
    out.width_v = 0.5 * (oz.vs_plus - oz.vs_minus);
  }
  out.w_sp = rabi0 * rabi0 * constants::c / (4.0 * system.omega13() * detuning0);
  out.varpi = rabi0 * rabi0 * system.xi() / (4.0 * detuning0);
  return out;
}

double pap_width_from_stirap(double varpi_stirap, double sigma, double t_int) {
  if (!(varpi_stirap > 0.0) || !(sigma > 0.0) || !(t_int > 0.0)) {
    throw DomainError("pap width needs positive inputs");
  }
  return std::sqrt(constants::pi) * sigma / t_int * varpi_stirap;
}

double OzMap::containment(const AtomicSystem& system) const {
  std::size_t transferred = 0;
  std::size_t inside = 0;
  for (std::size_t ir = 0; ir < ratios.size(); ++ir) {
    const OzCurves oz = oz_curves(ratios[ir] * rabi0, rabi0, system);
    for (std::size_t iv = 0; iv < v.size(); ++iv) {
      if (at(ir, iv) <= 0.5) continue;
      ++transferred;
      if (oz.contains(v[iv])) ++inside;
    }
  }
  return transferred == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(transferred);
}

OzMap oz_map(const AtomicSystem& system, const PulseTrain& train, std::span<const double> ratios,
             std::span<const double> velocities, const BatchOptions& options) {
  train.validate();
  OzMap map;
  map.ratios.assign(ratios.begin(), ratios.end());
  map.v.assign(velocities.begin(), velocities.end());
  map.rabi0 = train.peak_rabi();
  map.rho33.resize(ratios.size() * velocities.size());
  for (std::size_t ir = 0; ir < ratios.size(); ++ir) {
    Drive drive;
    drive.train = train;
    drive.mode = DriveMode::envelope;
    drive.pump_detuning0 = ratios[ir] * map.rabi0;
    drive.dump_detuning0 = drive.pump_detuning0;
    const auto states = evolve_batch(system, drive, velocities, options);
    for (std::size_t iv = 0; iv < velocities.size(); ++iv) {
      map.rho33[ir * velocities.size() + iv] = states[iv].population(2);
    }
  }
  return map;
}

std::vector<double> default_oz_ratios(std::size_t n) {
  if (n < 2) throw DomainError("need at least 2 ratios");
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = 3.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  return r;
}

std::vector<double> default_oz_velocities(double rabi0, const AtomicSystem& system, std::size_t n) {
  const OzCurves oz = oz_curves(0.0, rabi0, system);
  const double half = 0.75 * (oz.vs_plus - oz.vs_minus);
  VelocityGrid grid(-half, half, n);
  return {grid.values().begin(), grid.values().end()};
}

double profile_fwhm(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw DomainError("profile needs >= 3 samples");
  const auto top = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double half = 0.5 * y[top];
  std::size_t a = top;
  while (a > 0 && y[a] > half) --a;
  std::size_t b = top;
  while (b + 1 < y.size() && y[b] > half) ++b;
  if (y[a] > half || y[b] > half) throw NumericalError("peak not resolved inside the profile");
  const auto cross = [half](double x0, double y0, double x1, double y1) {
    return y1 == y0 ? 0.5 * (x0 + x1) : x0 + (half - y0) * (x1 - x0) / (y1 - y0);
  };
  return cross(x[b - 1], y[b - 1], x[b], y[b]) - cross(x[a], y[a], x[a + 1], y[a + 1]);
}

}  // namespace afc
