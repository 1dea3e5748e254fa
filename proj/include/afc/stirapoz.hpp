#pragma once

// STIRAP Optimal Zone: the velocity band, bounded by the Vs± and Vp± curves,
// in which a single pump/dump envelope pair transfers the population, the
// resulting tooth widths and the PAP <-> STIRAP width relation.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "afc/bloch.hpp"
#include "afc/model.hpp"

namespace afc {

struct OzCurves {
  double vs_plus = 0.0;
  double vs_minus = 0.0;
  std::optional<double> vp_plus;   ///< unset while complex valued
  std::optional<double> vp_minus;
  double threshold = 0.0;          ///< |Δ0|/Ω0 at which Vp± turn real: sqrt(ω32/ω13)

  /// Inside [Vs-, Vs+] and, where Vp± are real, outside (Vp-, Vp+).
  bool contains(double v) const;
};

/// Vs± = c/(2ω12ω13) { ±sqrt(ω13[(Δ0)²ω13 + Ω0²ω12]) - ω13Δ0 }
/// Vp± = c/(2ω32ω13) { ±sqrt(ω13[(Δ0)²ω13 - Ω0²ω32]) - ω13Δ0 }
OzCurves oz_curves(double detuning0, double rabi0, const AtomicSystem& system);

enum class OzRegime { below, above };
std::string_view to_string(OzRegime r);

struct StirapWidths {
  OzRegime regime = OzRegime::below;
  double width_v = 0.0;  ///< W_ss = (Vs+ - Vs-)/2 below threshold, W_sp = (Vs+ - Vp+)/2 above
  double w_sp = 0.0;     ///< large-detuning limit Ω0² c / (4 ω13 Δ0), m/s
  double varpi = 0.0;    ///< ϖ_STIRAP = Ω0² ξ / (4 Δ0), rad/s
};

StirapWidths stirap_widths(double detuning0, double rabi0, const AtomicSystem& system);

/// ϖ_PAP = (sqrt(π) σ / T_int) ϖ_STIRAP
double pap_width_from_stirap(double varpi_stirap, double sigma, double t_int);

struct OzMap {
  std::vector<double> ratios;  ///< Δ0/Ω0
  std::vector<double> v;       ///< m/s
  std::vector<double> rho33;   ///< row-major (ratio, v)
  double rabi0 = 0.0;

  double at(std::size_t ir, std::size_t iv) const { return rho33[ir * v.size() + iv]; }
  /// Share of cells with ρ33 > 0.5 that lie inside the optimal zone.
  double containment(const AtomicSystem& system) const;
};

/// Final ρ33 after the envelope-only (STIRAP) sequence of `train` for every
/// (Δ0/Ω0, v) pair, with Δp0 = Δd0 = ratio·Ω0 and Ω0 = train's peak.
OzMap oz_map(const AtomicSystem& system, const PulseTrain& train, std::span<const double> ratios,
             std::span<const double> velocities, const BatchOptions& options = {});

/// Default axes: 61 ratios on [0, 3]; 61 velocities over 1.5x the Δ0 = 0 Vs band.
std::vector<double> default_oz_ratios(std::size_t n = 61);
std::vector<double> default_oz_velocities(double rabi0, const AtomicSystem& system,
                                          std::size_t n = 61);

/// FWHM of a single-peaked profile by linear interpolation at half maximum.
double profile_fwhm(std::span<const double> x, std::span<const double> y);

}  // namespace afc
