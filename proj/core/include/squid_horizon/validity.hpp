#pragma once

// Audit of the assumptions behind the lumped-inductor, semiclassical model.

#include <string>
#include <vector>

#include "squid_horizon/bias.hpp"
#include "squid_horizon/circuit.hpp"

namespace squid_horizon::circuit {

enum class Comparison { AtMost, Below, Above };

struct ValidityCheck {
    std::string name;
    double value = 0.0;      // dimensionless
    double threshold = 0.0;
    Comparison comparison = Comparison::AtMost;
    bool pass = false;
    /// Signed relative headroom; positive when passing.
    double margin = 0.0;
};

struct ValidityReport {
    std::vector<ValidityCheck> checks;

    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] const ValidityCheck* find(const std::string& name) const;
};

struct ValidityLimits {
    double beta_L_max = 0.1;
    double frequency_fraction = 0.1;  // of omega_p^s at peak flux
    double flux_max = 0.45;           // Phi0
};

/// Checks, in order: beta_L, signal_frequency, peak_flux, impedance,
/// energy_ratio, pulse_velocity. Failures are reported, never thrown.
[[nodiscard]] ValidityReport validity_report(const ArrayParams& array, const SquidParams& squid,
                                             const bias::FluxPulse& pulse, double max_signal_frequency,
                                             const ValidityLimits& limits = {});

}  // namespace squid_horizon::circuit
