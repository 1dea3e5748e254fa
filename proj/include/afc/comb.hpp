#pragma once

// Detuning-domain view of a velocity comb and the measurement layer that
// extracts Γ, Δδ, N_c, ϖ and 𝓕 from it.

#include <cstddef>
#include <span>
#include <vector>

#include "afc/bloch.hpp"
#include "afc/model.hpp"

namespace afc {

struct AfcProfile {
  std::vector<double> delta;  ///< rad/s, δ = ω_map v / c
  std::vector<double> rho33;
  double omega_map = 0.0;
};

/// Pointwise δ = ω_map·v/c, no resampling. `weighted` selects ρ33·f(v)
/// instead of the per-atom probability.
AfcProfile vc_to_afc(const VelocityComb& comb, double omega_map, bool weighted = false);
AfcProfile vc_to_afc(std::span<const double> v, std::span<const double> rho33, double omega_map);

/// v = c·δ/ω_map.
std::vector<double> afc_to_velocity(std::span<const double> delta, double omega_map);

struct EnvelopeFit {
  double amplitude = 0.0;
  double center = 0.0;
  double gamma = 0.0;  ///< Γ_meas (standard deviation)
};

struct PeakSet {
  std::vector<double> centers;      ///< parabola-refined, rad/s
  std::vector<double> heights;
  std::vector<double> prominences;
  std::vector<double> fwhms;        ///< full width at half prominence, rad/s
  EnvelopeFit envelope;
};

/// Local maxima whose prominence is at least `min_prominence`·max(ρ33).
/// Throws NumericalError("no peaks found") when nothing qualifies.
PeakSet detect_peaks(const AfcProfile& profile, double min_prominence = 0.1);

struct MeasuredAfc {
  AfcMetrics metrics;          ///< n_peaks uses the envelope-base convention
  std::size_t n_peaks_raw = 0; ///< every detected tooth
  std::size_t n_peaks_base = 0;
  std::size_t n_core = 0;      ///< teeth within ±Γ that set ϖ
};

/// Δδ from a linear fit of the centres against tooth index, ϖ as the mean
/// FWHM of teeth within ±Γ_meas of the envelope centre, N_c as the number of
/// teeth whose envelope value is at least e^{-π} of its peak (|δ-μ| ≤ √(2π)Γ).
MeasuredAfc measure_afc(const PeakSet& peaks);

/// Mean ρ33 over the gaps between neighbouring teeth, excluding one FWHM
/// around each centre (the minimum of the gap when the teeth overlap).
/// Needs >= 2 teeth.
double inter_tooth_background(const AfcProfile& profile, const PeakSet& peaks);

struct CombFit {
  double amplitude = 0.0;
  double center = 0.0;        ///< envelope centre μ
  double tooth_offset = 0.0;  ///< position of the tooth nearest μ
  double gamma = 0.0;
  double delta_sep = 0.0;
  double fwhm = 0.0;
  double residual = 0.0;  ///< RMS misfit
  int iterations = 0;
};

/// Eq. (9) with free amplitude, envelope centre μ and tooth offset δ0:
///   A exp(-(δ-μ)²/2Γ²) Σ_j exp(-4 ln2 (δ-δ0-jΔδ)²/ϖ²)
double comb_model(double delta, double amplitude, double center, double gamma, double delta_sep,
                  double fwhm, double tooth_offset = 0.0);

/// Levenberg–Marquardt fit of `comb_model`, seeded from `peaks`. Throws
/// NumericalError for a single tooth (Δδ unidentifiable) or no convergence.
CombFit fit_comb_model(const AfcProfile& profile, const PeakSet& peaks);

}  // namespace afc
