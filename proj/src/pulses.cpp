#include "afc/pulses.hpp"

#include <cmath>

#include "afc/constants.hpp"
#include "afc/error.hpp"

namespace afc {

namespace {

double subpulse_sum(double t, const PulseTrain& train) {
  const double inv = 1.0 / (2.0 * train.sigma * train.sigma);
  double sum = 0.0;
  for (int l = 0; l < train.n_pulses; ++l) {
    const double dt = t - static_cast<double>(l) * train.t_int;
    sum += std::exp(-dt * dt * inv);
  }
  return sum;
}

}  // namespace

double PulseTrain::default_sigma_e(int n_pulses, double t_int) {
  const double tau = static_cast<double>(n_pulses - 1) * t_int;
  return tau / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

PulseTrain PulseTrain::make(double rabi0, int n_pulses, double t_int, double sigma) {
  PulseTrain train;
  train.rabi_p0 = rabi0;
  train.rabi_d0 = rabi0;
  train.n_pulses = n_pulses;
  train.t_int = t_int;
  train.sigma = sigma;
  train.sigma_e = default_sigma_e(n_pulses, t_int);
  return train;
}

void PulseTrain::validate() const {
  if (n_pulses < 2) throw DomainError("pulse train needs at least 2 pulses");
  if (!(t_int > 0.0) || !(sigma > 0.0) || !(sigma_e > 0.0)) {
    throw DomainError("pulse train widths and spacing must be positive");
  }
  if (!(rabi_p0 >= 0.0) || !(rabi_d0 >= 0.0)) {
    throw DomainError("peak Rabi frequencies must be nonnegative");
  }
  if (!(sigma < 0.25 * t_int)) throw DomainError("sub-pulses not resolvable: need sigma < T_int/4");
}

double PulseTrain::pump_envelope(double t) const {
  const double dt = t - tau();
  return rabi_p0 * std::exp(-dt * dt / (2.0 * sigma_e * sigma_e));
}

double PulseTrain::dump_envelope(double t) const {
  return rabi_d0 * std::exp(-t * t / (2.0 * sigma_e * sigma_e));
}

double omega_p(double t, const PulseTrain& train) {
  return train.pump_envelope(t) * subpulse_sum(t, train);
}

double omega_d(double t, const PulseTrain& train) {
  return train.dump_envelope(t) * subpulse_sum(t, train);
}

double mixing_angle(double rabi_p, double rabi_d) {
  if (rabi_p == 0.0 && rabi_d == 0.0) {
    throw DomainError("mixing angle undefined: both Rabi frequencies vanish");
  }
  return std::atan2(rabi_p, rabi_d);
}

double mixing_angle(double t, const PulseTrain& train) {
  return mixing_angle(omega_p(t, train), omega_d(t, train));
}

std::pair<double, double> dark_state(double t, const PulseTrain& train) {
  const double theta = mixing_angle(t, train);
  return {std::cos(theta), -std::sin(theta)};
}

Adiabaticity check_adiabaticity(const PulseTrain& train) {
  const double rabi = std::hypot(train.rabi_p0, train.rabi_d0);
  Adiabaticity out;
  out.area = rabi * train.tau();
  out.ok = out.area > 10.0 * constants::pi / std::sqrt(2.0);
  return out;
}

OfcSpectrum ofc_spectrum(const PulseTrain& train, Field which, std::span<const double> omega_grid) {
  train.validate();
  if (omega_grid.size() < 2) throw DomainError("spectrum grid needs at least 2 points");
  const double tooth = constants::two_pi / train.t_int;
  for (std::size_t i = 1; i < omega_grid.size(); ++i) {
    if (omega_grid[i] - omega_grid[i - 1] > tooth / 16.0) {
      throw DomainError("spectrum grid too coarse: need >= 16 bins per 2*pi/T_int");
    }
  }

  const double rabi0 = which == Field::pump ? train.rabi_p0 : train.rabi_d0;
  std::vector<double> weights(static_cast<std::size_t>(train.n_pulses));
  for (int n = 0; n < train.n_pulses; ++n) {
    const double tn = static_cast<double>(n) * train.t_int;
    const double offset = which == Field::pump ? tn - train.tau() : tn;
    weights[static_cast<std::size_t>(n)] =
        std::exp(-offset * offset / (2.0 * train.sigma_e * train.sigma_e));
  }

  OfcSpectrum out;
  out.envelope_bandwidth = 1.0 / train.sigma;
  out.frequencies.assign(omega_grid.begin(), omega_grid.end());
  out.amplitudes.resize(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    const double w = omega_grid[i];
    std::complex<double> sum = 0.0;
    for (int n = 0; n < train.n_pulses; ++n) {
      sum += weights[static_cast<std::size_t>(n)] *
             std::polar(1.0, static_cast<double>(n) * train.t_int * w);
    }
    out.amplitudes[i] = train.sigma * rabi0 * std::exp(-0.5 * w * w * train.sigma * train.sigma) * sum;
  }
  return out;
}

HarmonicMatch harmonic_match(double v, int n, int m, const PulseTrain& train,
                             const AtomicSystem& system, double pump_detuning0,
                             double dump_detuning0, double tolerance) {
  const double delta_omega = constants::two_pi / train.t_int;
  const double pump_carrier = system.omega12 + pump_detuning0;
  const double dump_carrier = system.omega32 + dump_detuning0;
  const auto base = doppler_detunings(v, pump_detuning0, dump_detuning0, pump_carrier, dump_carrier);
  HarmonicMatch out;
  out.pump_detuning = base.pump + static_cast<double>(n) * delta_omega;
  out.dump_detuning = base.dump + static_cast<double>(m) * delta_omega;
  out.resonant = std::abs(out.pump_detuning - out.dump_detuning) < tolerance;
  return out;
}

std::string_view to_string(Field f) { return f == Field::pump ? "pump" : "dump"; }

}  // namespace afc
