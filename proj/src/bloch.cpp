#include "afc/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "afc/constants.hpp"
#include "afc/error.hpp"
#include "afc/parallel.hpp"

namespace afc {

namespace {

constexpr std::size_t kBlockLanes = 64;
constexpr double kMinStep = 1e-16;             // s
constexpr double kMaxSteps = 2e8;              // per class
constexpr double kPopulationSlack = 1e-9;

struct Interval {
  double start;
  double end;
};

// Time windows that need numerical integration; outside them the fields are
// below exp(-w²/2) of their peak and the evolution is applied in closed form.
std::vector<Interval> active_intervals(const Drive& drive, const StepPolicy& policy,
                                       double t_end) {
  const PulseTrain& tr = drive.train;
  std::vector<Interval> out;
  if (drive.mode == DriveMode::envelope) {
    const double w = policy.envelope_window_sigmas * tr.sigma_e;
    out.push_back({-w, tr.tau() + w});
  } else {
    const double w = policy.window_sigmas * tr.sigma;
    for (int l = 0; l < tr.n_pulses; ++l) {
      const double centre = static_cast<double>(l) * tr.t_int;
      if (!out.empty() && centre - w <= out.back().end) {
        out.back().end = centre + w;
      } else {
        out.push_back({centre - w, centre + w});
      }
    }
  }
  std::vector<Interval> clipped;
  for (const Interval& iv : out) {
    if (iv.start >= t_end) break;
    clipped.push_back({iv.start, std::min(iv.end, t_end)});
  }
  return clipped;
}

double start_time(const Drive& drive, const StepPolicy& policy) {
  if (drive.mode == DriveMode::envelope) return -policy.envelope_window_sigmas * drive.train.sigma_e;
  return -policy.window_sigmas * drive.train.sigma;
}

double resolve_end(const Drive& drive, const EvolveOptions& options) {
  return options.t_end > 0.0 ? options.t_end : drive.default_end_time();
}

double max_detuning(const AtomicSystem& system, const Drive& drive,
                    std::span<const double> velocities) {
  double m = 0.0;
  for (double v : velocities) {
    const auto d = doppler_detunings(v, drive.pump_detuning0, drive.dump_detuning0,
                                     drive.pump_carrier(system), drive.dump_carrier(system));
    m = std::max({m, std::abs(d.pump), std::abs(d.dump)});
  }
  return m;
}

double step_bound(const Drive& drive, const StepPolicy& policy, double detuning_bound) {
  const double sigma_ref = drive.mode == DriveMode::envelope ? drive.train.sigma_e : drive.train.sigma;
  const double rate = std::max(detuning_bound, drive.train.peak_rabi());
  double h = sigma_ref / policy.sigma_divisor;
  if (rate > 0.0) h = std::min(h, 1.0 / (policy.step_factor * rate));
  return h;
}

struct IntervalGrid {
  Interval span;
  double h = 0.0;
  std::vector<kernels::FieldStep> steps;
};

std::vector<IntervalGrid> build_grids(const Drive& drive, const StepPolicy& policy, double t_end,
                                      double h_max) {
  if (!(h_max >= kMinStep) || !std::isfinite(h_max)) {
    std::ostringstream msg;
    msg << "step size underflow: h=" << h_max << " s";
    throw NumericalError(msg.str());
  }
  const int refine = std::max(1, policy.refine);
  std::vector<IntervalGrid> grids;
  double total_steps = 0.0;
  for (const Interval& iv : active_intervals(drive, policy, t_end)) {
    const double len = iv.end - iv.start;
    if (len <= 0.0) continue;
    const double n_d = std::ceil(len / h_max) * refine;
    total_steps += n_d;
    if (total_steps > kMaxSteps) {
      std::ostringstream msg;
      msg << "step budget exceeded: " << total_steps << " steps at h=" << h_max << " s";
      throw NumericalError(msg.str());
    }
    const auto n = static_cast<std::size_t>(n_d);
    IntervalGrid g;
    g.span = iv;
    g.h = len / static_cast<double>(n);
    g.steps.resize(n);
    double p_prev = drive.pump(iv.start);
    double d_prev = drive.dump(iv.start);
    for (std::size_t k = 0; k < n; ++k) {
      const double t0 = iv.start + g.h * static_cast<double>(k);
      const double t1 = k + 1 == n ? iv.end : iv.start + g.h * static_cast<double>(k + 1);
      const double tm = t0 + 0.5 * g.h;
      kernels::FieldStep f{};
      f.p0 = p_prev;
      f.d0 = d_prev;
      f.pm = drive.pump(tm);
      f.dm = drive.dump(tm);
      f.p1 = drive.pump(t1);
      f.d1 = drive.dump(t1);
      p_prev = f.p1;
      d_prev = f.d1;
      g.steps[k] = f;
    }
    grids.push_back(std::move(g));
  }
  return grids;
}

struct LaneBlock {
  std::vector<double> r11, r22, r33, x12, y12, x13, y13, x23, y23, dp, dd;

  explicit LaneBlock(std::size_t n)
      : r11(n, 1.0), r22(n), r33(n), x12(n), y12(n), x13(n), y13(n), x23(n), y23(n), dp(n), dd(n) {}

  kernels::BlochLanes view() {
    return {r11.data(), r22.data(), r33.data(), x12.data(), y12.data(), x13.data(),
            y13.data(), x23.data(), y23.data(), dp.data(), dd.data(), r11.size()};
  }

  DensityMatrix3 matrix(std::size_t i) const {
    DensityMatrix3 rho;
    rho(0, 0) = r11[i];
    rho(1, 1) = r22[i];
    rho(2, 2) = r33[i];
    rho(0, 1) = {x12[i], y12[i]};
    rho(0, 2) = {x13[i], y13[i]};
    rho(1, 2) = {x23[i], y23[i]};
    rho(1, 0) = std::conj(rho(0, 1));
    rho(2, 0) = std::conj(rho(0, 2));
    rho(2, 1) = std::conj(rho(1, 2));
    return rho;
  }

  // Closed-form field-free evolution over `duration` for lane i.
  void free_evolve(std::size_t i, double duration, kernels::DecayRates rates) {
    if (duration <= 0.0) return;
    const double g = rates.gamma21 + rates.gamma23;
    if (g > 0.0) {
      const double decay = std::exp(-g * duration);
      const double lost = r22[i] * (1.0 - decay);
      r11[i] += rates.gamma21 / g * lost;
      r33[i] += rates.gamma23 / g * lost;
      r22[i] *= decay;
    }
    const double half_decay = std::exp(-0.5 * g * duration);
    const auto rotate = [&](double& x, double& y, double phase, double damping) {
      const std::complex<double> z = std::complex<double>(x, y) * std::polar(damping, phase);
      x = z.real();
      y = z.imag();
    };
    rotate(x12[i], y12[i], -dp[i] * duration, half_decay);
    rotate(x13[i], y13[i], (dd[i] - dp[i]) * duration, 1.0);
    rotate(x23[i], y23[i], dd[i] * duration, half_decay);
  }
};

void check_state(const DensityMatrix3& rho, double v) {
  const double tr = rho.trace();
  bool bad = !std::isfinite(tr) || std::abs(tr - 1.0) > 1e-6;
  for (int i = 0; i < 3 && !bad; ++i) {
    const double p = rho.population(i);
    bad = p < -1e-6 || p > 1.0 + 1e-6;
  }
  if (bad) {
    std::ostringstream msg;
    msg << "density matrix left the physical domain at v=" << v << " m/s (trace=" << tr
        << ", populations=" << rho.population(0) << "," << rho.population(1) << ","
        << rho.population(2) << ")";
    throw NumericalError(msg.str());
  }
}

const kernels::KernelTable& pick(const kernels::KernelTable* k) {
  return k != nullptr ? *k : kernels::kernels();
}

}  // namespace

DensityMatrix3 DensityMatrix3::ground() {
  DensityMatrix3 rho;
  rho(0, 0) = 1.0;
  return rho;
}

double DensityMatrix3::hermiticity_error() const {
  double e = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) e = std::max(e, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  }
  return e;
}

double Drive::pump(double t) const {
  return mode == DriveMode::envelope ? train.pump_envelope(t) : omega_p(t, train);
}

double Drive::dump(double t) const {
  return mode == DriveMode::envelope ? train.dump_envelope(t) : omega_d(t, train);
}

double Drive::default_end_time() const { return train.tau() + 4.0 * train.sigma_e; }

double batch_step(const AtomicSystem& system, const Drive& drive,
                  std::span<const double> velocities, const StepPolicy& policy) {
  return step_bound(drive, policy, max_detuning(system, drive, velocities));
}

DensityMatrix3 evolve(const AtomicSystem& system, const Drive& drive, double v,
                      const EvolveOptions& options, const StepObserver& observer) {
  drive.train.validate();
  const double t_end = resolve_end(drive, options);
  const double bound = options.detuning_bound > 0.0
                           ? options.detuning_bound
                           : max_detuning(system, drive, std::span<const double>(&v, 1));
  const auto grids = build_grids(drive, options.policy, t_end, step_bound(drive, options.policy, bound));
  const kernels::DecayRates rates{system.gamma21, system.gamma23};
  const auto& k = kernels::kernels();

  LaneBlock lane(1);
  const auto det = doppler_detunings(v, drive.pump_detuning0, drive.dump_detuning0,
                                     drive.pump_carrier(system), drive.dump_carrier(system));
  lane.dp[0] = det.pump;
  lane.dd[0] = det.dump;
  auto view = lane.view();

  double t = start_time(drive, options.policy);
  if (observer) observer(t, lane.matrix(0));
  for (const IntervalGrid& g : grids) {
    if (g.span.start > t) {
      lane.free_evolve(0, g.span.start - t, rates);
      t = g.span.start;
      if (observer) observer(t, lane.matrix(0));
    }
    for (std::size_t s = 0; s < g.steps.size(); ++s) {
      k.bloch_rk4(view, std::span<const kernels::FieldStep>(&g.steps[s], 1), g.h, rates);
      t = s + 1 == g.steps.size() ? g.span.end : g.span.start + g.h * static_cast<double>(s + 1);
      if (observer) observer(t, lane.matrix(0));
    }
  }
  if (t_end > t) {
    lane.free_evolve(0, t_end - t, rates);
    if (observer) observer(t_end, lane.matrix(0));
  }
  DensityMatrix3 out = lane.matrix(0);
  check_state(out, v);
  return out;
}

std::vector<TrajectoryPoint> evolve_trajectory(const AtomicSystem& system, const Drive& drive,
                                               double v, const EvolveOptions& options,
                                               std::size_t stride) {
  std::vector<TrajectoryPoint> out;
  std::size_t count = 0;
  const std::size_t every = std::max<std::size_t>(1, stride);
  evolve(system, drive, v, options, [&](double t, const DensityMatrix3& rho) {
    if (count++ % every == 0) out.push_back({t, rho});
  });
  return out;
}

std::vector<DensityMatrix3> evolve_batch(const AtomicSystem& system, const Drive& drive,
                                         std::span<const double> velocities,
                                         const BatchOptions& options) {
  drive.train.validate();
  const EvolveOptions& eo = options.evolve;
  const double t_end = resolve_end(drive, eo);
  const double bound = eo.detuning_bound > 0.0 ? eo.detuning_bound
                                               : max_detuning(system, drive, velocities);
  const auto grids = build_grids(drive, eo.policy, t_end, step_bound(drive, eo.policy, bound));
  const kernels::DecayRates rates{system.gamma21, system.gamma23};
  const auto& k = pick(options.kernel);
  const double t_start = start_time(drive, eo.policy);

  std::vector<DensityMatrix3> out(velocities.size());
  const std::size_t n_blocks = (velocities.size() + kBlockLanes - 1) / kBlockLanes;
  parallel_for(n_blocks, options.threads, [&](std::size_t b) {
    const std::size_t first = b * kBlockLanes;
    const std::size_t count = std::min(kBlockLanes, velocities.size() - first);
    LaneBlock block(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto det = doppler_detunings(velocities[first + i], drive.pump_detuning0,
                                         drive.dump_detuning0, drive.pump_carrier(system),
                                         drive.dump_carrier(system));
      block.dp[i] = det.pump;
      block.dd[i] = det.dump;
    }
    auto view = block.view();
    double t = t_start;
    for (const IntervalGrid& g : grids) {
      if (g.span.start > t) {
        for (std::size_t i = 0; i < count; ++i) block.free_evolve(i, g.span.start - t, rates);
      }
      k.bloch_rk4(view, g.steps, g.h, rates);
      t = g.span.end;
    }
    if (t_end > t) {
      for (std::size_t i = 0; i < count; ++i) block.free_evolve(i, t_end - t, rates);
    }
    for (std::size_t i = 0; i < count; ++i) {
      out[first + i] = block.matrix(i);
      check_state(out[first + i], velocities[first + i]);
    }
  });
  return out;
}

VelocityComb velocity_comb(const AtomicSystem& system, const Drive& drive,
                           const GasParameters& gas, const VelocityGrid& grid,
                           const CombOptions& options) {
  system.validate();
  gas.validate();
  const auto states = evolve_batch(system, drive, grid.values(), options.batch);
  VelocityComb comb;
  comb.grid = grid;
  comb.rho33.resize(grid.size());
  comb.weighted.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = states[i].population(2);
    if (p < -kPopulationSlack || p > 1.0 + kPopulationSlack) {
      std::ostringstream msg;
      msg << "rho33 out of bounds at v=" << grid[i] << " m/s: " << p;
      throw NumericalError(msg.str());
    }
    comb.rho33[i] = std::clamp(p, 0.0, 1.0);
    comb.weighted[i] = comb.rho33[i] * maxwell_boltzmann(grid[i], gas);
  }
  comb.params.system = system;
  comb.params.drive = drive;
  comb.params.gas = gas;
  comb.params.t_end = resolve_end(drive, options.batch.evolve);
  comb.params.policy = options.batch.evolve.policy;
  comb.params.step = batch_step(system, drive, grid.values(), options.batch.evolve.policy);
  comb.params.isa = std::string(kernels::to_string(pick(options.batch.kernel).isa));
  return comb;
}

VelocityGrid default_comb_grid(const AtomicSystem& system, const Drive& drive,
                               const GasParameters& gas, double map_omega) {
  (void)map_omega;  // the velocity extent does not depend on the mapping frequency
  const PulseTrain& tr = drive.train;
  const double w13 = system.omega13();
  const double gamma_v = std::sqrt(2.0) * constants::c / (w13 * tr.sigma);
  const double tooth_v = constants::two_pi * constants::c / (tr.t_int * w13);
  double half = std::max(3.0 * gamma_v, 20.0 * tooth_v);
  half = std::min(half, 4.0 * gas.eta());

  const double detuning = std::abs(drive.pump_detuning0);
  const double rabi = tr.peak_rabi();
  double width_v = tooth_v / 4.0;
  if (detuning > 0.0) {
    const double fwhm_v = std::sqrt(constants::pi) * rabi * rabi * tr.sigma * constants::c /
                          (4.0 * detuning * tr.t_int * w13);
    width_v = std::min(width_v, fwhm_v);
  }
  const double dv = width_v / 8.0;
  auto n = static_cast<std::size_t>(std::ceil(2.0 * half / dv)) + 1;
  if (n % 2 == 0) ++n;
  return VelocityGrid(-half, half, std::max<std::size_t>(n, 3));
}

ConvergenceReport step_halving_check(const AtomicSystem& system, const Drive& drive,
                                     std::span<const double> velocities,
                                     std::span<const double> rho33_default,
                                     const BatchOptions& options) {
  BatchOptions refined = options;
  refined.evolve.policy.refine = std::max(1, options.evolve.policy.refine) * 2;
  if (refined.evolve.detuning_bound <= 0.0) {
    refined.evolve.detuning_bound = max_detuning(system, drive, velocities);
  }
  const auto states = evolve_batch(system, drive, velocities, refined);
  ConvergenceReport report;
  report.rho33_refined.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    report.rho33_refined[i] = states[i].population(2);
    const double change = std::abs(report.rho33_refined[i] - rho33_default[i]);
    if (change > report.max_abs_change) {
      report.max_abs_change = change;
      report.v_at_max = velocities[i];
    }
  }
  return report;
}

}  // namespace afc
