#include "afc/memory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "afc/constants.hpp"
#include "afc/error.hpp"

namespace afc {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// φ1(x) = (e^x-1)/x and φ2(x) = (e^x-1-x)/x², by series near 0.
void phi12(cd x, cd ex, cd& p1, cd& p2) {
  if (std::abs(x) < 1e-2) {
    p1 = 1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)));
    p2 = 0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0)));
    return;
  }
  p1 = (ex - 1.0) / x;
  p2 = (ex - 1.0 - x) / (x * x);
}

// Per-step coefficients for one (h, gate) pair, stored split re/im for the kernels.
struct StepCoefficients {
  double h = -1.0;
  bool gate = false;
  std::vector<double> pr, pi, qar, qai, qbr, qbi, wr, wi;  // w = weight·u·P
  cd beta_a, beta_b;  // Σ weight·u·Qa, Σ weight·u·Qb
  cd b;               // field coupling to Σ weight·u·S
};

struct Medium {
  std::size_t k = 0;
  std::vector<double> delta_on;   // δ(v) with the control on
  std::vector<double> delta_off;  // δs - δc with the control off
  std::vector<cd> wu;             // weight·u
  std::vector<cd> u;              // 1/(δs + iγ)
  cd a_field;                     // -i κ²/c Σ weight·u
  double kappa = 0.0;
  double omega_c = 0.0;
};

void build_coefficients(const Medium& m, double h, bool gate, StepCoefficients& c) {
  c.h = h;
  c.gate = gate;
  const std::size_t k = m.k;
  for (auto* v : {&c.pr, &c.pi, &c.qar, &c.qai, &c.qbr, &c.qbi, &c.wr, &c.wi}) v->resize(k);
  c.beta_a = 0.0;
  c.beta_b = 0.0;
  const double wc2 = m.omega_c * m.omega_c;
  for (std::size_t i = 0; i < k; ++i) {
    cd lambda;
    cd coupling = 0.0;
    if (gate) {
      lambda = kI * m.delta_on[i] + (wc2 * m.u[i]).imag();
      coupling = -kI * m.kappa * m.omega_c * m.u[i];
    } else {
      lambda = kI * m.delta_off[i];
    }
    const cd x = lambda * h;
    const cd ex = std::exp(x);
    cd p1, p2;
    phi12(x, ex, p1, p2);
    const cd qa = h * (p1 - p2) * coupling;
    const cd qb = h * p2 * coupling;
    c.pr[i] = ex.real();
    c.pi[i] = ex.imag();
    c.qar[i] = qa.real();
    c.qai[i] = qa.imag();
    c.qbr[i] = qb.real();
    c.qbi[i] = qb.imag();
    const cd w = m.wu[i] * ex;
    c.wr[i] = w.real();
    c.wi[i] = w.imag();
    c.beta_a += m.wu[i] * qa;
    c.beta_b += m.wu[i] * qb;
  }
  c.b = gate ? -kI * m.kappa * m.omega_c / constants::c : cd(0.0);
}

double trapezoid_nonuniform(std::span<const double> t, std::span<const double> y, std::size_t from,
                            std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
  return s;
}

}  // namespace

std::string_view to_string(RetrievalMode m) {
  return m == RetrievalMode::forward ? "forward" : "backward";
}

void StorageConfig::validate() const {
  if (delta_s0 == 0.0) throw DomainError("signal detuning delta_s0 must be nonzero");
  if (!(omega_c >= 0.0)) throw DomainError("control Rabi frequency must be nonnegative");
  if (!(tau_p > 0.0)) throw DomainError("photon duration tau_p must be positive");
  if (!(length > 0.0)) throw DomainError("medium length must be positive");
  if (z_points < 3) throw DomainError("need at least 3 z points");
  if (t_f && !(*t_f > t_c)) throw DomainError("t_f must lie after the photon centre");
  if (dt < 0.0) throw DomainError("time step must be nonnegative");
  if (coupling && !(*coupling > 0.0)) throw DomainError("coupling constant must be positive");
  for (const GateInterval& g : control_gate) {
    if (!(g.t_off > g.t_on)) throw DomainError("control gate interval must have t_off > t_on");
  }
}

double StorageConfig::control_detuning0() const {
  return delta_c0.value_or(delta_s0 - omega_c * omega_c / delta_s0);
}

bool StorageConfig::control_on(double t) const {
  if (control_gate.empty()) return true;
  for (const GateInterval& g : control_gate) {
    if (t >= g.t_on && t < g.t_off) return true;
  }
  return false;
}

EffectiveDetunings effective_detunings(double v, double delta_s0, double delta_c0, double omega_c,
                                       const AtomicSystem& system) {
  if (delta_s0 == 0.0) throw DomainError("signal detuning delta_s0 must be nonzero");
  EffectiveDetunings d;
  d.delta_s = delta_s0 + v / constants::c * system.omega32;
  const double w42 = system.omega42 > 0.0 ? system.omega42 : system.omega32 + system.omega34();
  d.delta_c = delta_c0 + v / constants::c * w42;
  const cd shift = omega_c * omega_c / cd(d.delta_s, system.gamma());
  d.delta = d.delta_s - d.delta_c - shift.real();
  return d;
}

double dipole_moment23(const AtomicSystem& system) {
  if (system.dipole23) return *system.dipole23;
  if (!(system.gamma23 > 0.0)) {
    throw DomainError("dipole23 unset and gamma23 = 0: cannot derive the coupling constant");
  }
  const double w3 = system.omega32 * system.omega32 * system.omega32;
  const double c3 = constants::c * constants::c * constants::c;
  return std::sqrt(system.gamma23 * 3.0 * constants::pi * constants::epsilon0 * constants::hbar * c3 / w3);
}

double coupling_constant(const AtomicSystem& system) {
  return dipole_moment23(system) *
         std::sqrt(system.omega32 / (2.0 * constants::epsilon0 * constants::hbar));
}

std::vector<double> input_photon(double tau_p, double t_c, std::span<const double> t) {
  if (!(tau_p > 0.0)) throw DomainError("photon duration must be positive");
  if (t.empty() || t.front() > t_c - 5.0 * tau_p || t.back() < t_c + 5.0 * tau_p) {
    throw DomainError("time grid must cover t_c +/- 5 tau_p");
  }
  const double amp = 1.0 / std::sqrt(tau_p * std::sqrt(constants::pi));
  std::vector<double> e(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = (t[i] - t_c) / tau_p;
    e[i] = amp * std::exp(-0.5 * d * d);
  }
  return e;
}

double analytic_efficiency(double od, double finesse) {
  if (!(od > 0.0) || !(finesse > 0.0)) throw DomainError("OD and finesse must be positive");
  const double a = 1.0 - std::exp(-od / finesse);
  return a * a * std::exp(-7.0 / finesse);
}

std::vector<double> MemoryResult::output_intensity() const {
  const std::size_t iz = mode == RetrievalMode::backward ? 0 : z.size() - 1;
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = std::norm(at(i, iz));
  return out;
}

MemoryResult propagate(const VelocityComb& comb, const StorageConfig& cfg,
                       const AtomicSystem& system, const GasParameters& gas,
                       const MemoryOptions& options) {
  cfg.validate();
  system.validate();
  gas.validate();
  const auto& kern = options.kernel != nullptr ? *options.kernel : kernels::kernels();
  const std::size_t n_cls = comb.grid.size();
  if (n_cls < 3 || comb.rho33.size() != n_cls) throw DomainError("comb has no usable classes");

  MemoryResult res;
  res.mode = cfg.mode;
  res.delta_c0 = cfg.control_detuning0();
  res.coupling = cfg.coupling.value_or(coupling_constant(system));
  const double retrieval = comb.params.drive.train.t_int / system.xi();
  res.t_f = cfg.t_f.value_or(2.0 * cfg.t_c + retrieval);
  res.t_switch = 0.5 * res.t_f;

  // Classes.
  Medium m;
  m.k = n_cls;
  m.kappa = res.coupling * std::sqrt(gas.density);
  m.omega_c = cfg.omega_c;
  res.v.assign(comb.grid.values().begin(), comb.grid.values().end());
  res.delta.resize(n_cls);
  res.weight.resize(n_cls);
  m.delta_on.resize(n_cls);
  m.delta_off.resize(n_cls);
  m.u.resize(n_cls);
  m.wu.resize(n_cls);
  const double dv = comb.grid.spacing();
  cd sum_wu = 0.0;
  for (std::size_t i = 0; i < n_cls; ++i) {
    const auto d = effective_detunings(res.v[i], cfg.delta_s0, res.delta_c0, cfg.omega_c, system);
    res.delta[i] = d.delta;
    m.delta_on[i] = d.delta;
    m.delta_off[i] = d.delta_s - d.delta_c;
    m.u[i] = 1.0 / cd(d.delta_s, system.gamma());
    const double end = (i == 0 || i + 1 == n_cls) ? 0.5 : 1.0;
    res.weight[i] = comb.rho33[i] * maxwell_boltzmann(res.v[i], gas) / gas.density * dv * end;
    m.wu[i] = res.weight[i] * m.u[i];
    sum_wu += m.wu[i];
  }
  m.a_field = -kI * m.kappa * m.kappa / constants::c * sum_wu;

  // Time grid with t_switch on a node.
  const double t0 = std::min(0.0, cfg.t_c - 5.0 * cfg.tau_p);
  const double dt_target = cfg.dt > 0.0 ? cfg.dt : cfg.tau_p / 50.0;
  if (dt_target > cfg.tau_p / 10.0) {
    std::ostringstream msg;
    msg << "time step " << dt_target << " s too coarse: need <= tau_p/10 = " << cfg.tau_p / 10.0;
    throw NumericalError(msg.str());
  }
  if (!(res.t_switch > t0)) throw DomainError("t_f/2 must lie after the start of the time grid");
  const auto n1 = static_cast<std::size_t>(std::ceil((res.t_switch - t0) / dt_target));
  const auto n2 = static_cast<std::size_t>(std::ceil((res.t_f - res.t_switch) / dt_target));
  const double h1 = (res.t_switch - t0) / static_cast<double>(n1);
  const double h2 = (res.t_f - res.t_switch) / static_cast<double>(n2);
  res.t.resize(n1 + n2 + 1);
  for (std::size_t i = 0; i <= n1; ++i) res.t[i] = t0 + h1 * static_cast<double>(i);
  for (std::size_t i = 1; i <= n2; ++i) res.t[n1 + i] = res.t_switch + h2 * static_cast<double>(i);
  res.t.back() = res.t_f;

  // Every class must keep its own phase over the whole run.
  double max_gap = 0.0;
  for (std::size_t i = 0; i + 1 < n_cls; ++i) {
    max_gap = std::max(max_gap, std::abs(res.delta[i + 1] - res.delta[i]));
  }
  const double span = res.t_f - t0;
  if (max_gap * span > constants::pi) {
    std::ostringstream msg;
    msg << "detuning grid under-resolved: class spacing " << max_gap
        << " rad/s, need < " << constants::pi / span << " rad/s (refine the velocity grid)";
    throw NumericalError(msg.str());
  }

  const std::size_t nz = cfg.z_points;
  const double dz = cfg.length / static_cast<double>(nz - 1);
  res.z.resize(nz);
  for (std::size_t j = 0; j < nz; ++j) res.z[j] = dz * static_cast<double>(j);
  const std::size_t nt = res.t.size();
  res.field.assign(nt * nz, 0.0);

  std::vector<double> input(nt);
  {
    const double amp = 1.0 / std::sqrt(cfg.tau_p * std::sqrt(constants::pi));
    for (std::size_t i = 0; i < nt; ++i) {
      const double d = (res.t[i] - cfg.t_c) / cfg.tau_p;
      input[i] = amp * std::exp(-0.5 * d * d);
    }
  }
  const bool backward = cfg.mode == RetrievalMode::backward;
  auto input_at = [&](std::size_t it) -> cd {
    if (backward && it > n1) return 0.0;
    return input[it];
  };

  // Spin wave, split re/im, row-major (z, class) in propagation coordinates.
  std::vector<double> sr(nz * n_cls, 0.0), si(nz * n_cls, 0.0);
  std::vector<cd> e_prev(nz), e_next(nz);
  bool mirrored = false;
  auto store_field = [&](std::size_t it, const std::vector<cd>& e) {
    for (std::size_t j = 0; j < nz; ++j) {
      const std::size_t phys = mirrored ? nz - 1 - j : j;
      res.field[it * nz + phys] = e[j];
    }
  };
  auto snapshot = [&](std::size_t it) {
    SpinSnapshot snap;
    snap.t = res.t[it];
    snap.s.resize(nz * n_cls);
    for (std::size_t j = 0; j < nz; ++j) {
      const std::size_t phys = mirrored ? nz - 1 - j : j;
      for (std::size_t k = 0; k < n_cls; ++k) {
        snap.s[phys * n_cls + k] = cd(sr[j * n_cls + k], si[j * n_cls + k]);
      }
    }
    res.spin.push_back(std::move(snap));
  };

  // Field at fixed time from the current spin wave.
  auto solve_static = [&](std::size_t it, bool gate, std::vector<cd>& e) {
    const cd b = gate ? -kI * m.kappa * cfg.omega_c / constants::c : cd(0.0);
    std::vector<double> wr(n_cls), wi(n_cls);
    for (std::size_t k = 0; k < n_cls; ++k) {
      wr[k] = m.wu[k].real();
      wi[k] = m.wu[k].imag();
    }
    const cd a = m.a_field;
    e[0] = input_at(it);
    cd src_prev = b * kern.complex_dot(wr.data(), wi.data(), sr.data(), si.data(), n_cls);
    for (std::size_t j = 1; j < nz; ++j) {
      const cd src = b * kern.complex_dot(wr.data(), wi.data(), sr.data() + j * n_cls,
                                          si.data() + j * n_cls, n_cls);
      e[j] = (e[j - 1] * (1.0 + 0.5 * dz * a) + 0.5 * dz * (src_prev + src)) / (1.0 - 0.5 * dz * a);
      src_prev = src;
    }
  };

  solve_static(0, cfg.control_on(res.t[0]), e_prev);
  store_field(0, e_prev);

  StepCoefficients coef;
  for (std::size_t it = 0; it + 1 < nt; ++it) {
    const double h = res.t[it + 1] - res.t[it];
    const bool gate = cfg.control_on(res.t[it] + 0.5 * h);
    if (coef.h != h || coef.gate != gate) build_coefficients(m, h, gate, coef);
    const cd a = m.a_field + coef.b * coef.beta_b;
    const double* wr = coef.wr.data();
    const double* wi = coef.wi.data();

    auto source = [&](std::size_t j) {
      const cd dot = kern.complex_dot(wr, wi, sr.data() + j * n_cls, si.data() + j * n_cls, n_cls);
      return coef.b * (dot + e_prev[j] * coef.beta_a);
    };
    auto advance_spin = [&](std::size_t j) {
      kern.spin_update(sr.data() + j * n_cls, si.data() + j * n_cls, coef.pr.data(), coef.pi.data(),
                       coef.qar.data(), coef.qai.data(), coef.qbr.data(), coef.qbi.data(), e_prev[j],
                       e_next[j], n_cls);
    };

    e_next[0] = input_at(it + 1);
    cd src_prev = source(0);
    for (std::size_t j = 1; j < nz; ++j) {
      const cd src = source(j);
      e_next[j] = (e_next[j - 1] * (1.0 + 0.5 * dz * a) + 0.5 * dz * (src_prev + src)) /
                  (1.0 - 0.5 * dz * a);
      advance_spin(j - 1);
      src_prev = src;
    }
    advance_spin(nz - 1);
    std::swap(e_prev, e_next);

    if (backward && it + 1 == n1) {
      store_field(it + 1, e_prev);
      for (std::size_t j = 0; j < nz / 2; ++j) {
        const std::size_t o = nz - 1 - j;
        std::swap_ranges(sr.begin() + static_cast<long>(j * n_cls),
                         sr.begin() + static_cast<long>((j + 1) * n_cls),
                         sr.begin() + static_cast<long>(o * n_cls));
        std::swap_ranges(si.begin() + static_cast<long>(j * n_cls),
                         si.begin() + static_cast<long>((j + 1) * n_cls),
                         si.begin() + static_cast<long>(o * n_cls));
      }
      if (cfg.conjugate_on_switch) {
        for (double& x : si) x = -x;
      }
      mirrored = true;
      // The reversed-direction field at the switch time, from the mirrored wave.
      solve_static(it + 1, gate, e_prev);
      // Keep the forward field for the storage-half record at t_switch.
      continue;
    }
    store_field(it + 1, e_prev);
    if (options.spin_stride > 0 && (it + 1) % options.spin_stride == 0) snapshot(it + 1);
  }
  if (options.spin_stride == 0 || (nt - 1) % options.spin_stride != 0) snapshot(nt - 1);

  // Efficiencies.
  std::vector<double> in2(nt), out_l(nt), out_0(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    in2[i] = input[i] * input[i];
    out_l[i] = std::norm(res.at(i, nz - 1));
    out_0[i] = std::norm(res.at(i, 0));
  }
  res.input_norm = trapezoid_nonuniform(res.t, in2, 0, nt - 1);
  res.transmitted = trapezoid_nonuniform(res.t, out_l, 0, n1);
  res.eta_s = std::clamp(1.0 - res.transmitted, 0.0, 1.0);
  const std::vector<double>& retrieved = backward ? out_0 : out_l;
  std::vector<double> tail = retrieved;
  if (backward) tail[n1] = 0.0;  // the stored value at t_switch is the forward field
  res.eta_r = std::clamp(trapezoid_nonuniform(res.t, tail, n1, nt - 1), 0.0, 1.0);
  res.od_effective = res.eta_s < 1.0 ? -std::log(1.0 - res.eta_s) : INFINITY;

  if (res.eta_r > 0.01) {
    std::size_t best = n1 + 1;
    for (std::size_t i = n1 + 1; i < nt; ++i) {
      if (retrieved[i] > retrieved[best]) best = i;
    }
    double t_peak = res.t[best];
    if (best > n1 + 1 && best + 1 < nt) {
      const double y0 = retrieved[best - 1], y1 = retrieved[best], y2 = retrieved[best + 1];
      const double denom = y0 - 2.0 * y1 + y2;
      if (denom < 0.0) t_peak += 0.5 * (y0 - y2) / denom * h2;
    }
    res.echo_time = t_peak - cfg.t_c;
  }
  return res;
}

}  // namespace afc
