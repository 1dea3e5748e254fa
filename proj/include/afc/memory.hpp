#pragma once

// Off-resonant Raman storage of a single-photon envelope in the prepared comb
// and its echo: input photon, effective detunings, the coupled z/t
// propagation of the field E(z,t) and spin wave S(z,t,δ), and the
// efficiencies derived from them.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "afc/bloch.hpp"
#include "afc/kernels.hpp"
#include "afc/model.hpp"

namespace afc {

enum class RetrievalMode { backward, forward };

std::string_view to_string(RetrievalMode m);

/// Control field on during [t_on, t_off).
struct GateInterval {
  double t_on = 0.0;
  double t_off = 0.0;
};

struct StorageConfig {
  double delta_s0 = 0.0;                ///< signal detuning at rest (rad/s)
  std::optional<double> delta_c0;       ///< unset: AC-Stark compensated δs0 - Ωc²/δs0
  double omega_c = 0.0;                 ///< control Rabi frequency (rad/s)
  std::vector<GateInterval> control_gate;  ///< empty: control always on
  double tau_p = 0.0;                   ///< photon duration (s)
  double t_c = 0.0;                     ///< photon centre (s)
  double length = 0.0;                  ///< medium length L (m)
  std::size_t z_points = 101;
  std::optional<double> t_f;            ///< unset: 2 t_c + T̃
  std::optional<double> coupling;       ///< g (m^{3/2}/s); unset: from dipole23 or γ23
  double dt = 0.0;                      ///< time step target; 0 selects τp/50
  RetrievalMode mode = RetrievalMode::backward;
  bool conjugate_on_switch = false;     ///< backward variant: S -> conj(S(L-z))

  void validate() const;
  double control_detuning0() const;
  bool control_on(double t) const;
};

struct EffectiveDetunings {
  double delta_s = 0.0;  ///< δs(v)
  double delta_c = 0.0;  ///< δc(v)
  double delta = 0.0;    ///< δ(v) = δs - δc - Re{Ωc²/(δs+iγ)}
};

/// δs(v) = δs0 + ω32 v/c, δc(v) = δc0 + ω42 v/c. Throws DomainError for δs0 = 0.
EffectiveDetunings effective_detunings(double v, double delta_s0, double delta_c0, double omega_c,
                                       const AtomicSystem& system);

/// μ23 from γ23 = μ²ω32³/(3π ε0 ħ c³), unless the system carries dipole23.
double dipole_moment23(const AtomicSystem& system);
/// g = μ23 sqrt(ω32 / (2 ε0 ħ)).
double coupling_constant(const AtomicSystem& system);

/// E(0,t) = (τp sqrt(π))^{-1/2} exp(-(t-t_c)²/2τp²). Throws DomainError when
/// the grid does not cover t_c ± 5τp.
std::vector<double> input_photon(double tau_p, double t_c, std::span<const double> t);

/// (1 - exp(-OD/𝓕))² exp(-7/𝓕)
double analytic_efficiency(double od, double finesse);

struct MemoryOptions {
  /// Keep S(z,δ) every `spin_stride` time steps (0: only the final state).
  std::size_t spin_stride = 0;
  const kernels::KernelTable* kernel = nullptr;
};

struct SpinSnapshot {
  double t = 0.0;
  std::vector<std::complex<double>> s;  ///< row-major (z, class)
};

struct MemoryResult {
  std::vector<double> t;       ///< s
  std::vector<double> z;       ///< m, physical position
  std::vector<double> v;       ///< velocity of each class
  std::vector<double> delta;   ///< δ(v) of each class (rad/s)
  std::vector<double> weight;  ///< ρ33 f(v)/ϱ · dv quadrature weight per class
  /// E at physical position z, row-major (t, z). Units s^{-1/2}.
  std::vector<std::complex<double>> field;
  std::vector<SpinSnapshot> spin;

  double eta_s = 0.0;
  double eta_r = 0.0;
  double echo_time = 0.0;      ///< relative to t_c; 0 when no echo
  double od_effective = 0.0;
  double input_norm = 0.0;
  double transmitted = 0.0;    ///< ∫|E(L,t)|² over the storage half
  double t_switch = 0.0;
  double t_f = 0.0;
  double coupling = 0.0;
  double delta_c0 = 0.0;
  RetrievalMode mode = RetrievalMode::backward;

  std::complex<double> at(std::size_t it, std::size_t iz) const { return field[it * z.size() + iz]; }
  /// Field leaving the medium at the retrieval face (z=0 backward, z=L forward).
  std::vector<double> output_intensity() const;
};

/// Integrates the propagation and spin-wave equations over the comb carried
/// by `comb` (classes with their ρ33 and Maxwell–Boltzmann weight).
///
/// Scheme: each class is advanced in t with an exponential integrator that is
/// exact for the linear term and treats E as linear over the step; E(z) is
/// then obtained at the new time by the trapezoid rule in z, solved
/// implicitly for the coupling through S. Backward retrieval mirrors the spin
/// wave S(z) -> S(L-z) at t_f/2 and reports the field leaving z=0.
MemoryResult propagate(const VelocityComb& comb, const StorageConfig& cfg,
                       const AtomicSystem& system, const GasParameters& gas,
                       const MemoryOptions& options = {});

}  // namespace afc
