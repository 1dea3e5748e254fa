#pragma once

// Pump/dump pulse trains for piecewise adiabatic passage, dark-state
// diagnostics and the optical-frequency-comb picture of each train.

#include <complex>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "afc/model.hpp"

namespace afc {

enum class Field { pump, dump };

/// Two trains of N Gaussian sub-pulses (width σ, spacing T_int) under
/// Gaussian envelopes of width σ_e. The dump envelope peaks at t = 0 and the
/// pump envelope at τ = (N-1) T_int; sub-pulse l of both trains sits at l·T_int.
struct PulseTrain {
  double rabi_p0 = 0.0;
  double rabi_d0 = 0.0;
  int n_pulses = 0;
  double t_int = 0.0;
  double sigma = 0.0;
  double sigma_e = 0.0;

  /// σ_e = τ / (2 sqrt(2 ln 2)): the envelope FWHM equals the envelope delay.
  static double default_sigma_e(int n_pulses, double t_int);
  static PulseTrain make(double rabi0, int n_pulses, double t_int, double sigma);

  void validate() const;
  double tau() const { return static_cast<double>(n_pulses - 1) * t_int; }
  double peak_rabi() const { return rabi_p0 > rabi_d0 ? rabi_p0 : rabi_d0; }

  double pump_envelope(double t) const;
  double dump_envelope(double t) const;
};

/// Ω_p(t): direct sum of all N sub-pulses.
double omega_p(double t, const PulseTrain& train);
/// Ω_d(t): direct sum of all N sub-pulses.
double omega_d(double t, const PulseTrain& train);

/// θ = arctan(Ω_p/Ω_d). Throws DomainError when both Rabi frequencies vanish.
double mixing_angle(double rabi_p, double rabi_d);
double mixing_angle(double t, const PulseTrain& train);

/// Dark-state amplitudes on (|1>, |3>): (cos θ, -sin θ).
std::pair<double, double> dark_state(double t, const PulseTrain& train);

struct Adiabaticity {
  double area = 0.0;  ///< Ω τ with Ω² = Ω_p0² + Ω_d0²
  bool ok = false;    ///< area > 10π/sqrt(2)
};
Adiabaticity check_adiabaticity(const PulseTrain& train);

struct OfcSpectrum {
  std::vector<double> frequencies;                ///< rad/s
  std::vector<std::complex<double>> amplitudes;   ///< Ω̃(ω)
  double envelope_bandwidth = 0.0;                ///< 1/σ
};

/// Closed-form comb spectrum of one train,
///   Ω̃(ω) = σ Ω0 exp(-ω²σ²/2) Σ_n Ω_n exp(i n T_int ω),
/// with Ω_n the envelope sampled at the sub-pulse centres.
/// Throws DomainError when the grid spacing exceeds (2π/T_int)/16.
OfcSpectrum ofc_spectrum(const PulseTrain& train, Field which, std::span<const double> omega_grid);

struct HarmonicMatch {
  double pump_detuning = 0.0;  ///< Δ_p^n(v)
  double dump_detuning = 0.0;  ///< Δ_d^m(v)
  bool resonant = false;
};

/// Detunings of pump harmonic n and dump harmonic m seen by an atom moving at v.
HarmonicMatch harmonic_match(double v, int n, int m, const PulseTrain& train,
                             const AtomicSystem& system, double pump_detuning0,
                             double dump_detuning0, double tolerance);

inline constexpr double kDefaultHarmonicTolerance = 2.0 * 3.14159265358979323846 * 1.0e3;

std::string_view to_string(Field f);

}  // namespace afc
