#pragma once

#include <random>

#include "squid_horizon/circuit.hpp"
#include "squid_horizon/config.hpp"

namespace fixtures {

inline squid_horizon::circuit::SquidParams reference_squid() {
    squid_horizon::circuit::SquidParams s;
    s.junction.critical_current = 2e-6;
    s.junction.capacitance = squid_horizon::circuit::capacitance_for_plasma_frequency(2e-6, 2.0 * 3.141592653589793e12);
    s.loop_inductance = 1e-11;
    return s;
}

inline squid_horizon::circuit::ArrayParams reference_array(std::size_t n_cells = 4800) {
    return {n_cells, 0.25e-6, 5e-17, 50.0};
}

/// Fixed-seed source for property tests.
inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5eed0000ULL + salt); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace fixtures
