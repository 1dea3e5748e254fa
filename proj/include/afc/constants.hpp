#pragma once

#include <numbers>

namespace afc::constants {

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double c = 299792458.0;               // m/s
inline constexpr double k_b = 1.380649e-23;            // J/K
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double amu = 1.66053906660e-27;       // kg

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace afc::constants
