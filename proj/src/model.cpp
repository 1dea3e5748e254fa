#include "afc/model.hpp"

#include <cmath>

#include "afc/constants.hpp"
#include "afc/error.hpp"

namespace afc {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void AtomicSystem::validate() const {
  require_positive(omega32, "omega32");
  if (!(omega12 > omega32)) {
    throw DomainError("omega12 must exceed omega32 (nondegenerate ground states)");
  }
  if (omega42 < 0.0) throw DomainError("omega42 must be nonnegative");
  if (omega42 > 0.0 && !(omega42 > omega32)) {
    throw DomainError("omega42 must exceed omega32 when a storage level is configured");
  }
  if (gamma21 < 0.0 || gamma23 < 0.0) throw DomainError("decay rates must be nonnegative");
  if (coherence_decay && *coherence_decay < 0.0) {
    throw DomainError("coherence_decay must be nonnegative");
  }
  if (dipole23 && !(*dipole23 > 0.0)) throw DomainError("dipole23 must be positive");
}

void GasParameters::validate() const {
  require_positive(density, "density");
  if (eta_override) {
    require_positive(*eta_override, "eta_override");
    return;
  }
  require_positive(temperature, "temperature");
  require_positive(atomic_mass, "atomic_mass");
}

double GasParameters::eta() const {
  if (eta_override) return *eta_override;
  return std::sqrt(constants::k_b * temperature / atomic_mass);
}

VelocityGrid::VelocityGrid(double v_min, double v_max, std::size_t n_points)
    : v_min_(v_min), v_max_(v_max) {
  if (n_points < 3) throw DomainError("velocity grid needs at least 3 points");
  if (!(v_max > v_min)) throw DomainError("velocity grid needs v_max > v_min");
  spacing_ = (v_max - v_min) / static_cast<double>(n_points - 1);
  values_.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    values_[i] = v_min + spacing_ * static_cast<double>(i);
  }
  values_.back() = v_max;
}

double maxwell_boltzmann(double v, const GasParameters& gas) {
  const double eta = gas.eta();
  return gas.density / (std::sqrt(2.0 * constants::pi) * eta) *
         std::exp(-v * v / (2.0 * eta * eta));
}

std::vector<double> maxwell_boltzmann(const VelocityGrid& grid, const GasParameters& gas) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = maxwell_boltzmann(grid[i], gas);
  return out;
}

DopplerDetunings doppler_detunings(double v, double pump_detuning0, double dump_detuning0,
                                   double pump_carrier, double dump_carrier) {
  require_positive(pump_carrier, "pump carrier frequency");
  require_positive(dump_carrier, "dump carrier frequency");
  return {pump_detuning0 + pump_carrier * v / constants::c,
          dump_detuning0 + dump_carrier * v / constants::c};
}

double v_two_photon(int order, double delta_omega, double omega13) {
  if (omega13 == 0.0) {
    throw DomainError("velocity comb undefined for degenerate ground states (omega13 = 0)");
  }
  return static_cast<double>(order) * delta_omega * constants::c / omega13;
}

AnalyticAfc afc_metrics_analytic(double rabi0, double sigma, double t_int, double detuning0,
                                 const AtomicSystem& system) {
  require_positive(rabi0, "rabi0");
  require_positive(sigma, "sigma");
  require_positive(t_int, "t_int");
  require_positive(detuning0, "detuning0");
  system.validate();

  const double xi = system.xi();
  const double sqrt_pi = std::sqrt(constants::pi);
  AnalyticAfc out;
  AfcMetrics& m = out.metrics;
  m.gamma = std::sqrt(2.0) * xi / sigma;
  m.delta_sep = xi * constants::two_pi / t_int;
  m.n_peaks = 2.0 * t_int / (sqrt_pi * sigma);
  m.peak_fwhm = sqrt_pi * rabi0 * rabi0 * sigma * xi / (4.0 * detuning0 * t_int);
  m.finesse = m.delta_sep / m.peak_fwhm;
  m.retrieval_time = t_int / xi;

  const double abs_detuning = std::abs(detuning0);
  out.fwhm_valid = abs_detuning > rabi0 * std::sqrt(system.omega32 / system.omega13());
  out.fwhm_valid_omega12 = abs_detuning > rabi0 * std::sqrt(system.omega32 / system.omega12);
  return out;
}

DesignConditions design_conditions(double rabi0, double sigma, double detuning0,
                                   const AtomicSystem& system) {
  require_positive(rabi0, "rabi0");
  require_positive(sigma, "sigma");
  require_positive(detuning0, "detuning0");
  DesignConditions out;
  out.finesse_parameter = rabi0 * rabi0 * sigma / detuning0;
  out.finesse_ok = out.finesse_parameter <= 0.8 * std::sqrt(constants::pi);
  out.ratio_ok = system.omega34() < system.omega13();
  return out;
}

double trapezoid(std::span<const double> y, double dx) {
  if (y.size() < 2) return 0.0;
  double sum = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) sum += y[i];
  return sum * dx;
}

}  // namespace afc
