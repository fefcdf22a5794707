#pragma once

// Time-domain oracles for a single dc-SQUID: the full two-phase model with
// loop screening and damping, and the reduced flux-tunable junction.

#include <cstddef>
#include <span>
#include <vector>

#include "squid_horizon/circuit.hpp"

namespace squid_horizon::circuit {

/// Uniformly sampled signal with linear interpolation; one sample means a constant.
class Waveform {
public:
    static Waveform constant(double value);
    Waveform(std::vector<double> samples, double dt);

    [[nodiscard]] double at(double t) const;
    [[nodiscard]] std::span<const double> samples() const { return samples_; }

private:
    std::vector<double> samples_;
    double dt_ = 0.0;
};

struct SquidState {
    double gamma_plus = 0.0;    // rad
    double gamma_minus = 0.0;   // rad
    double dgamma_plus = 0.0;   // rad/s
    double dgamma_minus = 0.0;  // rad/s
    double t = 0.0;             // s
};

struct FullModelOptions {
    bool damping = true;            // needs normal_resistance when true
    std::size_t sample_every = 1;
};

/// Classical RK4 integration of the coupled gamma+/gamma- equations.
///
/// Requires beta_L > 0 and dt <= 0.05 / omega_p. Throws NonFinite if the
/// state blows up.
[[nodiscard]] std::vector<SquidState> single_squid_dynamics(const SquidParams& squid, const Waveform& drive_current,
                                                            const Waveform& flux_ext, const SquidState& initial,
                                                            double dt, std::size_t n_steps,
                                                            const FullModelOptions& options = {});

struct PhaseSample {
    double t = 0.0;       // s
    double gamma = 0.0;   // rad
    double dgamma = 0.0;  // rad/s
};

struct ReducedTrajectory {
    std::vector<PhaseSample> samples;
    /// Max relative deviation of the O(dt^2)-corrected energy from its initial value.
    double energy_drift = 0.0;
    /// Same, for the uncorrected energy (dominated by the O(dt^2) oscillation).
    double raw_energy_deviation = 0.0;
    /// Phase left the initial well (|gamma| > 2 pi): no static solution.
    bool running = false;
};

/// Velocity-Verlet integration of gamma'' / (omega_p^s)^2 + sin(gamma) = I / I_c^s.
[[nodiscard]] ReducedTrajectory reduced_junction_dynamics(const SquidParams& squid, const Waveform& drive_current,
                                                          const Waveform& flux_ext, double gamma0, double dgamma0,
                                                          double dt, std::size_t n_steps,
                                                          std::size_t sample_every = 1);

/// Angular frequency from a least-squares fit to interpolated upward zero crossings
/// of x(t) - mean(x). Throws FitFailure with fewer than two crossings.
[[nodiscard]] double estimate_frequency(std::span<const double> t, std::span<const double> x);

}  // namespace squid_horizon::circuit
