#pragma once

// Physical constants (SI, CODATA 2018) and angular-frequency helpers.
// All frequencies in this library are angular (rad/s) unless a name says otherwise.

#include <numbers>

namespace cavlink {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace constants {
inline constexpr double k_boltzmann = 1.380649e-23;          // J/K
inline constexpr double atomic_mass = 1.66053906660e-27;     // kg
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double speed_of_light = 2.99792458e8;       // m/s
} // namespace constants

// 2π×MHz is the natural unit of the cavity-QED parameter space.
inline constexpr double mhz_2pi(double v) { return v * 1e6 * two_pi; }
inline constexpr double hz_to_rad(double v) { return v * two_pi; }

} // namespace cavlink
