#pragma once

// Junction and dc-SQUID physics in the lumped-inductor regime.
//
// All quantities are SI. Fluxes are in Wb; helpers taking a "fraction" work
// in units of the flux quantum.

#include <cstddef>
#include <optional>

namespace squid_horizon::circuit {

struct JunctionParams {
    double critical_current = 0.0;  // A
    double capacitance = 0.0;       // F
    std::optional<double> normal_resistance;  // Ohm, only used by the damped SQUID oracle
};

struct SquidParams {
    JunctionParams junction;      // both junctions identical
    double loop_inductance = 0.0; // H
};

struct ArrayParams {
    std::size_t n_cells = 0;
    double cell_length = 0.0;            // m
    double ground_capacitance = 0.0;     // F
    double environment_impedance = 0.0; // Ohm
};

struct Energies {
    double josephson = 0.0;  // J
    double charging = 0.0;   // J
    [[nodiscard]] double ratio() const { return josephson / charging; }
};

void validate(const JunctionParams& junction);
void validate(const SquidParams& squid);
void validate(const ArrayParams& array);

/// Junction capacitance that gives the requested single-junction plasma frequency.
[[nodiscard]] double capacitance_for_plasma_frequency(double critical_current, double plasma_frequency);

/// Single-junction plasma frequency sqrt(2 pi I_c / (C_J Phi0)), rad/s.
[[nodiscard]] double plasma_frequency(const JunctionParams& junction);

/// Characteristic frequency 2 pi I_c R_N / Phi0; throws InvalidArgument without R_N.
[[nodiscard]] double characteristic_frequency(const JunctionParams& junction);

[[nodiscard]] double flux_from_fraction(double fraction);
[[nodiscard]] double fraction_from_flux(double flux);

/// Throws FluxOutOfRange unless |flux| < Phi0/2.
void check_flux_domain(double flux);

/// Flux-tuned critical current 2 I_c cos(pi Phi / Phi0).
[[nodiscard]] double squid_critical_current(const SquidParams& squid, double flux);

/// sqrt(2 pi I_c^s / (2 C_J Phi0)); coincides with the single-junction value at zero flux.
[[nodiscard]] double effective_plasma_frequency(const SquidParams& squid, double flux);

/// Josephson inductance Phi0 arcsin(I/I_c^s) / (2 pi I).
///
/// The small-current branch |I/I_c^s| < 1e-6 uses the series of arcsin(x)/x,
/// so the zero-current value is exactly Phi0 / (2 pi I_c^s).
[[nodiscard]] double josephson_inductance(const SquidParams& squid, double current, double flux);

/// Propagation velocity a / sqrt(L C0) of the lumped line.
[[nodiscard]] double cell_velocity(const ArrayParams& array, const SquidParams& squid, double flux,
                                   double current = 0.0);

[[nodiscard]] Energies energies(const SquidParams& squid, double flux);

[[nodiscard]] double beta_L(const SquidParams& squid);

/// Array impedance seen by one junction, R_Q sqrt(2 pi e^2 sec(pi Phi/Phi0) / (Phi0 C0 I_c)).
[[nodiscard]] double array_impedance(const ArrayParams& array, const SquidParams& squid, double flux);

}  // namespace squid_horizon::circuit
