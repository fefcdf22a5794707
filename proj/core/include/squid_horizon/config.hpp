#pragma once

// Run configuration: a strict JSON file with SI units spelled out in each key.
//
//   {
//     "junction": {"critical_current_A": 2e-6, "plasma_frequency_rad_s": 6.283185307179586e12},
//     "squid":    {"loop_inductance_H": 1e-11},
//     "array":    {"n_cells": 4800, "cell_length_m": 2.5e-7, "ground_capacitance_F": 5e-17,
//                  "environment_impedance_ohm": 50},
//     "pulse":    {"shape": "tanh", "amplitude_phi0": 0.2, "velocity_ratio": 0.95,
//                  "steepness_per_m": "auto", "broadening_per_m": "calibrate", ...},
//     "solver":   {...}, "validity": {...}, "dispersion": {...}, "output": {...}
//   }
//
// Every key is optional; missing keys take the reference values below.
// Unknown keys are rejected.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squid_horizon/bias.hpp"
#include "squid_horizon/circuit.hpp"
#include "squid_horizon/lattice.hpp"
#include "squid_horizon/validity.hpp"

namespace squid_horizon::config {

inline constexpr double kReferencePlasmaFrequency = 2.0 * 3.141592653589793 * 1e12;

struct JunctionSection {
    double critical_current = 2e-6;
    /// Exactly one of capacitance / plasma_frequency is set.
    std::optional<double> capacitance;
    std::optional<double> plasma_frequency = kReferencePlasmaFrequency;
    std::optional<double> normal_resistance;
    bool operator==(const JunctionSection&) const = default;
};

struct SquidSection {
    double loop_inductance = 1e-11;
    bool operator==(const SquidSection&) const = default;
};

struct ArraySection {
    std::size_t n_cells = 4800;
    double cell_length = 0.25e-6;
    double ground_capacitance = 5e-17;
    double environment_impedance = 50.0;
    bool operator==(const ArraySection&) const = default;
};

struct PulseSection {
    bias::PulseShape shape = bias::PulseShape::TanhStep;
    double amplitude = 0.2;
    double dc_offset = 0.0;
    /// Absolute velocity; when unset, velocity_ratio times the unbiased line velocity.
    std::optional<double> velocity;
    double velocity_ratio = 0.95;
    /// Unset: steepest front allowed by the gradient cap omega_p^s(0) / (2 pi 10).
    std::optional<double> steepness;
    double front_position = 0.0;
    /// Unset: calibrated so T_H falls by target_decay per reference_cells.
    std::optional<double> broadening_rate;
    double broadening_target_decay = 0.1;
    std::size_t broadening_reference_cells = 1000;
    bool operator==(const PulseSection&) const = default;
};

struct PacketSection {
    double center_cells = 600.0;
    double sigma_cells = 20.0;
    double ka = 0.1;
    double amplitude = 1e-6;  // V
    int direction = +1;
    bool operator==(const PacketSection&) const = default;
};

struct SolverSection {
    std::optional<double> dt;  // unset: courant_fraction sqrt(L_min C0)
    std::size_t n_steps = 4000;
    double courant_fraction = 0.2;
    lattice::Boundary boundary = lattice::Boundary::Absorbing;
    std::size_t record_every = 200;
    bool current_dependent_inductance = false;
    PacketSection packet;
    bool operator==(const SolverSection&) const = default;
};

struct ValiditySection {
    double max_signal_frequency = 1e11;  // rad/s
    double beta_L_max = 0.1;
    double flux_max = 0.45;
    double frequency_fraction = 0.1;
    bool operator==(const ValiditySection&) const = default;
};

struct DispersionSection {
    std::vector<double> ka_points{0.05, 0.1, 0.2, 0.3, 1.0, 2.0};
    bool operator==(const DispersionSection&) const = default;
};

struct OutputSection {
    std::string dir;
    std::vector<std::string> emit{"csv"};
    std::size_t workers = 1;
    bool operator==(const OutputSection&) const = default;
};

struct RunConfig {
    JunctionSection junction;
    SquidSection squid;
    ArraySection array;
    PulseSection pulse;
    SolverSection solver;
    ValiditySection validity;
    DispersionSection dispersion;
    OutputSection output;
    bool operator==(const RunConfig&) const = default;
};

/// Domain objects with every derived quantity resolved.
struct Setup {
    circuit::ArrayParams array;
    circuit::SquidParams squid;
    bias::FluxPulse pulse;
    circuit::ValidityLimits limits;
    double max_signal_frequency = 0.0;
};

/// Parses JSON text. Throws ParseError (with line:column), UnknownKey (with
/// the nearest valid key) or ConfigError (with key path and line).
[[nodiscard]] RunConfig parse_config(std::string_view text);
/// Reads and parses a file; an unreadable file is a ConfigError.
[[nodiscard]] RunConfig load_config(const std::string& path);

[[nodiscard]] std::string to_json(const RunConfig& config, int indent = 2);

/// Builds validated domain objects; errors surface as ConfigError.
[[nodiscard]] Setup resolve(const RunConfig& config);

/// Gradient cap |dc/dx| = omega_p^s(0) / (2 pi 10) used for the automatic steepness.
[[nodiscard]] double gradient_cap(const circuit::SquidParams& squid);

/// Throws ConfigError unless path names a key of the schema, e.g. "array.ground_capacitance_F".
void require_key_path(std::string_view path);

/// Sets a numeric value at a dotted path such as "pulse.dc_offset_phi0".
/// Throws ConfigError if the path does not name a key of the schema.
[[nodiscard]] RunConfig with_value(const RunConfig& config, std::string_view path, double value);

/// Nearest schema key by edit distance.
[[nodiscard]] std::string nearest_key(std::string_view key, const std::vector<std::string>& candidates);

}  // namespace squid_horizon::config
