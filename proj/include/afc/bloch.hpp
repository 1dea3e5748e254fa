#pragma once

// Three-level density-matrix dynamics per velocity class under the PAP
// trains (or their smooth envelopes, i.e. plain STIRAP), and the velocity
// comb ρ33(v) left behind after the sequence.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "afc/kernels.hpp"
#include "afc/model.hpp"
#include "afc/pulses.hpp"

namespace afc {

/// 3x3 Hermitian density matrix, row-major, basis (|1>, |2>, |3>).
struct DensityMatrix3 {
  std::array<std::complex<double>, 9> m{};

  static DensityMatrix3 ground();

  std::complex<double>& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
  const std::complex<double>& operator()(int i, int j) const {
    return m[static_cast<std::size_t>(3 * i + j)];
  }
  double population(int i) const { return (*this)(i, i).real(); }
  double trace() const { return population(0) + population(1) + population(2); }
  /// max |ρij - conj(ρji)|
  double hermiticity_error() const;
};

enum class DriveMode {
  pap,       ///< full pulse trains
  envelope,  ///< envelopes only: a single STIRAP pump/dump pair
};

/// Fields plus nominal detunings seen by atoms at rest.
struct Drive {
  PulseTrain train;
  DriveMode mode = DriveMode::pap;
  double pump_detuning0 = 0.0;
  double dump_detuning0 = 0.0;

  double pump(double t) const;
  double dump(double t) const;
  double pump_carrier(const AtomicSystem& s) const { return s.omega12 + pump_detuning0; }
  double dump_carrier(const AtomicSystem& s) const { return s.omega32 + dump_detuning0; }
  /// Readout time τ + 4σ_e, after both envelopes have decayed.
  double default_end_time() const;
};

/// Fixed-step RK4 policy:
///   h = min(σ_ref / sigma_divisor, 1 / (step_factor · max(|Δp|, |Δd|, Ω0)))
/// with σ_ref = σ for trains and σ_e for envelopes. `refine` divides h
/// further (2 = step halving). Between sub-pulses, beyond `window_sigmas`·σ
/// of every pulse centre, the field-free evolution is applied in closed form.
struct StepPolicy {
  double step_factor = 20.0;
  double sigma_divisor = 10.0;
  double window_sigmas = 7.0;
  double envelope_window_sigmas = 4.0;
  int refine = 1;
};

struct EvolveOptions {
  StepPolicy policy;
  double t_end = 0.0;  ///< 0 selects Drive::default_end_time()
  /// Largest per-lane |Δp|,|Δd| used for the step bound. 0 = this class only.
  double detuning_bound = 0.0;
};

struct TrajectoryPoint {
  double t;
  DensityMatrix3 rho;
};

using StepObserver = std::function<void(double t, const DensityMatrix3& rho)>;

/// Integrates one velocity class from |1><1|. Returns the state at t_end; the
/// observer (optional) sees the state after every accepted step, including
/// the closed-form free-evolution jumps.
DensityMatrix3 evolve(const AtomicSystem& system, const Drive& drive, double v,
                      const EvolveOptions& options = {}, const StepObserver& observer = {});

/// Same as `evolve`, recording every `stride`-th point.
std::vector<TrajectoryPoint> evolve_trajectory(const AtomicSystem& system, const Drive& drive,
                                               double v, const EvolveOptions& options = {},
                                               std::size_t stride = 1);

struct BatchOptions {
  EvolveOptions evolve;
  unsigned threads = 1;
  const kernels::KernelTable* kernel = nullptr;  ///< nullptr selects kernels()
};

/// Final states for many velocity classes sharing one time grid.
std::vector<DensityMatrix3> evolve_batch(const AtomicSystem& system, const Drive& drive,
                                         std::span<const double> velocities,
                                         const BatchOptions& options = {});

/// Step actually used for a batch (before `refine`), for manifests.
double batch_step(const AtomicSystem& system, const Drive& drive,
                  std::span<const double> velocities, const StepPolicy& policy);

struct CombSnapshot {
  AtomicSystem system;
  Drive drive;
  GasParameters gas;
  double t_end = 0.0;
  double step = 0.0;
  StepPolicy policy;
  std::string isa;
};

struct VelocityComb {
  VelocityGrid grid;
  std::vector<double> rho33;     ///< per-atom probability
  std::vector<double> weighted;  ///< rho33 · f(v)
  CombSnapshot params;
};

struct CombOptions {
  BatchOptions batch;
};

/// One `evolve` per class of `grid`; returns ρ33 at Drive::default_end_time().
VelocityComb velocity_comb(const AtomicSystem& system, const Drive& drive,
                           const GasParameters& gas, const VelocityGrid& grid,
                           const CombOptions& options = {});

/// Velocity span ±max(3Γ c/ω_map, 20 Δv_tooth) clipped to ±4η, sampled with
/// at least 8 points per predicted tooth FWHM.
VelocityGrid default_comb_grid(const AtomicSystem& system, const Drive& drive,
                               const GasParameters& gas, double map_omega);

struct ConvergenceReport {
  double max_abs_change = 0.0;
  double v_at_max = 0.0;
  std::vector<double> rho33_refined;
};

/// Re-runs the classes with the step halved and reports the largest change in
/// the final ρ33.
ConvergenceReport step_halving_check(const AtomicSystem& system, const Drive& drive,
                                     std::span<const double> velocities,
                                     std::span<const double> rho33_default,
                                     const BatchOptions& options = {});

}  // namespace afc
