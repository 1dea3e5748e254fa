#pragma once

// Parameter sets shared by the unit tests.

#include "afc/constants.hpp"
#include "afc/model.hpp"
#include "afc/pulses.hpp"

namespace afc::test {

inline constexpr double two_pi = constants::two_pi;

inline AtomicSystem fig4_system(double gamma = 1e7) {
  AtomicSystem s;
  s.omega32 = two_pi * 637e12;
  s.omega12 = 2.5 * s.omega32;
  s.gamma21 = gamma;
  s.gamma23 = gamma;
  return s;
}

inline AtomicSystem ba_system() {
  AtomicSystem s;
  s.omega12 = two_pi * 540e12;
  s.omega32 = two_pi * 200e12;
  s.omega42 = two_pi * 265.35e12;
  s.gamma21 = 1.19e8;
  s.gamma23 = 0.25e6;
  return s;
}

inline GasParameters ba_gas() {
  GasParameters g;
  g.temperature = 1073.15;
  g.atomic_mass = 137.327 * constants::amu;
  g.density = 2.5e20;
  return g;
}

inline GasParameters eta_gas(double eta = 350.0) {
  GasParameters g;
  g.density = 1.0;
  g.eta_override = eta;
  return g;
}

inline PulseTrain fig4_train() { return PulseTrain::make(two_pi * 151e6, 16, 0.17e-6, 6.2e-9); }

}  // namespace afc::test
