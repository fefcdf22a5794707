#pragma once

// Effective 1+1 geometry seen by long-wavelength modes in the comoving frame
// of a flux pulse: c(xi), horizons where c = u, and Hawking estimates.

#include <cstddef>
#include <functional>
#include <vector>

#include "squid_horizon/bias.hpp"
#include "squid_horizon/circuit.hpp"

namespace squid_horizon::geometry {

struct VelocityProfile {
    std::vector<double> x;  // comoving coordinate, strictly increasing (m)
    std::vector<double> c;  // local propagation velocity (m/s)
    double u = 0.0;         // pulse velocity (m/s)
    double t = 0.0;         // snapshot time (s)
    /// Analytic c(xi) when the profile came from a pulse; empty for sampled data.
    std::function<double(double)> evaluate;

    [[nodiscard]] double velocity_at(double xi) const;
};

struct ProfileGrid {
    double xi_min = 0.0;
    double xi_max = 0.0;
    double spacing = 0.0;
};

/// Grid spanning the pulse front with cell-length spacing, wide enough to reach both plateaus.
[[nodiscard]] ProfileGrid default_grid(const circuit::ArrayParams& array, const bias::FluxPulse& pulse, double t);

[[nodiscard]] VelocityProfile velocity_profile(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                               const bias::FluxPulse& pulse, double t);
[[nodiscard]] VelocityProfile velocity_profile(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                               const bias::FluxPulse& pulse, double t, const ProfileGrid& grid);

/// Inverse metric g^{mu nu} = (1/c^2) [[1, -u], [-u, u^2 - c^2]].
struct EffectiveMetric {
    double g_tt = 0.0;
    double g_tx = 0.0;
    double g_xx = 0.0;

    [[nodiscard]] double determinant() const { return g_tt * g_xx - g_tx * g_tx; }
};

[[nodiscard]] EffectiveMetric effective_metric(double c, double u);
/// Throws OutOfRange when xi lies outside the profile grid.
[[nodiscard]] EffectiveMetric effective_metric(const VelocityProfile& profile, double xi);

enum class HorizonKind { Black, White };

const char* to_string(HorizonKind kind) noexcept;

struct HorizonReport {
    double position = 0.0;           // m, comoving
    HorizonKind kind = HorizonKind::Black;
    double velocity_gradient = 0.0;  // |dc/dx| at the horizon, 1/s
    double temperature = 0.0;        // K
    double power = 0.0;              // W
};

/// Every sign change of c - u, refined below the grid spacing.
///
/// The medium flows at -u in the comoving frame; a horizon where c grows with
/// xi lets modes fall into the slow region only, which is the black kind.
[[nodiscard]] std::vector<HorizonReport> find_horizons(const VelocityProfile& profile);

/// (hbar / 2 pi k_B) |dc/dx|.
[[nodiscard]] double hawking_temperature(double velocity_gradient);
/// Temperature of the first black horizon; throws NoHorizon if there is none.
[[nodiscard]] double hawking_temperature(const VelocityProfile& profile);

/// Single-channel bosonic heat flow (pi / 12 hbar)(k_B T)^2.
[[nodiscard]] double radiated_power(double temperature);

/// Photon emission rate, taking k_B T as the mean quantum: power / (k_B T).
[[nodiscard]] double photon_rate(double temperature);

/// Steepness s0 for which |dc/dx| at the black horizon equals target_gradient.
[[nodiscard]] double steepness_for_gradient(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                            const bias::FluxPulse& pulse, double target_gradient);

struct TemperatureSample {
    double t = 0.0;
    double position = 0.0;
    double velocity_gradient = 0.0;
    double temperature = 0.0;
    double power = 0.0;
};

struct PhotonBudget {
    double count = 0.0;
    double traversal_time = 0.0;
    std::vector<TemperatureSample> trace;
};

/// Photons emitted while the pulse crosses line_length_cells cells, by Simpson
/// integration of photon_rate(T_H(t)) over the traversal time N a / u.
/// Throws NoHorizon if there is no black horizon at t = 0.
[[nodiscard]] PhotonBudget photons_per_pulse(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                             const bias::FluxPulse& pulse, std::size_t line_length_cells,
                                             std::size_t n_samples = 129);

}  // namespace squid_horizon::geometry
