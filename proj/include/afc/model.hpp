#pragma once

// Gas, level-scheme and velocity-grid types plus the closed-form comb
// predictions (bandwidth, tooth spacing, tooth count, tooth width, finesse,
// retrieval time and the two design conditions).
//
// Units: every frequency, detuning and Rabi frequency is angular (rad/s).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace afc {

/// Λ scheme |1>,|3> -> |2> plus an optional storage level |4>.
struct AtomicSystem {
  double omega12 = 0.0;  ///< |1>-|2> Bohr frequency
  double omega32 = 0.0;  ///< |3>-|2> Bohr frequency
  double omega42 = 0.0;  ///< |4>-|2> Bohr frequency, 0 when unused
  double gamma21 = 0.0;  ///< population decay |2> -> |1> (1/s)
  double gamma23 = 0.0;  ///< population decay |2> -> |3> (1/s)
  std::optional<double> coherence_decay;  ///< γ of the storage equations; γ21/2 if unset
  std::optional<double> dipole23;         ///< C·m; derived from γ23 if unset

  void validate() const;

  double omega13() const { return omega12 - omega32; }
  /// Storage transition. Falls back to ω32 when no |4> is configured
  /// (one-photon configuration, |4> degenerate with |2>).
  double omega34() const { return omega42 > 0.0 ? omega42 - omega32 : omega32; }
  double xi() const { return omega34() / omega13(); }
  double r() const { return omega12 / omega32; }
  double gamma() const { return coherence_decay.value_or(0.5 * gamma21); }
};

struct GasParameters {
  double temperature = 0.0;  ///< K
  double atomic_mass = 0.0;  ///< kg
  double density = 0.0;      ///< atoms/m^3
  std::optional<double> eta_override;  ///< m/s

  void validate() const;
  /// Velocity standard deviation sqrt(k_B T / m).
  double eta() const;
};

/// Uniform, strictly increasing velocity samples.
class VelocityGrid {
 public:
  VelocityGrid() = default;
  VelocityGrid(double v_min, double v_max, std::size_t n_points);

  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return spacing_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  double v_min_ = 0.0;
  double v_max_ = 0.0;
  double spacing_ = 0.0;
  std::vector<double> values_;
};

struct AfcMetrics {
  double gamma = 0.0;           ///< envelope standard deviation Γ
  double delta_sep = 0.0;       ///< tooth spacing Δδ
  double n_peaks = 0.0;         ///< tooth count N_c
  double peak_fwhm = 0.0;       ///< tooth FWHM ϖ
  double finesse = 0.0;         ///< Δδ / ϖ
  double retrieval_time = 0.0;  ///< 2π / Δδ
};

struct AnalyticAfc {
  AfcMetrics metrics;
  /// |Δ0| > Ω0 sqrt(ω32/ω13): the tooth-width estimate is in its regime.
  bool fwhm_valid = false;
  /// Same test with ω12 in place of ω13 (the main-text variant of the bound).
  bool fwhm_valid_omega12 = false;
};

struct DesignConditions {
  double finesse_parameter = 0.0;  ///< Ω0² σ / Δ0
  bool finesse_ok = false;         ///< finesse_parameter <= (4/5) sqrt(π)
  bool ratio_ok = false;           ///< ω34 < ω13, i.e. retrieval later than T_int
};

struct DopplerDetunings {
  double pump = 0.0;
  double dump = 0.0;
};

/// Maxwell–Boltzmann density per unit velocity, ϱ / (sqrt(2π) η) exp(-v²/2η²).
double maxwell_boltzmann(double v, const GasParameters& gas);

/// f(v) sampled on `grid`.
std::vector<double> maxwell_boltzmann(const VelocityGrid& grid, const GasParameters& gas);

/// Δ(v) = Δ0 + ω_carrier v / c for each field.
DopplerDetunings doppler_detunings(double v, double pump_detuning0, double dump_detuning0,
                                   double pump_carrier, double dump_carrier);

/// Velocity of the comb tooth of the given order, order·Δω·c/ω13.
double v_two_photon(int order, double delta_omega, double omega13);

AnalyticAfc afc_metrics_analytic(double rabi0, double sigma, double t_int, double detuning0,
                                 const AtomicSystem& system);

DesignConditions design_conditions(double rabi0, double sigma, double detuning0,
                                   const AtomicSystem& system);

/// Composite trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> y, double dx);

}  // namespace afc
