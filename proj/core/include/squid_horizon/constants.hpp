#pragma once

#include <numbers>

namespace squid_horizon::constants {

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double planck = 6.62607015e-34;           // J s
inline constexpr double reduced_planck = planck / (2.0 * std::numbers::pi);
inline constexpr double electron_charge = 1.602176634e-19; // C
inline constexpr double boltzmann = 1.380649e-23;          // J/K
inline constexpr double vacuum_light_speed = 299792458.0;  // m/s

inline constexpr double flux_quantum = planck / (2.0 * electron_charge);                        // Wb
inline constexpr double resistance_quantum = planck / (4.0 * electron_charge * electron_charge); // Ohm

/// Value quoted in the literature for R_Q, used only as a cross-check.
inline constexpr double resistance_quantum_nominal = 6.45e3;

}  // namespace squid_horizon::constants
