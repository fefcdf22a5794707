#pragma once

// Canned reproductions, the trapping demonstration and the parameter sweep engine.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "squid_horizon/config.hpp"
#include "squid_horizon/geometry.hpp"

namespace squid_horizon::experiments {

/// Reference configuration resolved to domain objects.
[[nodiscard]] config::Setup reference_setup();

// Velocity profile of a step pulse ------------------------------------------

struct Fig2Result {
    geometry::VelocityProfile profile;  // t = 0
    std::vector<double> flux;           // Phi0, on profile.x
    std::vector<geometry::HorizonReport> horizons;
    double unbiased_velocity = 0.0;     // c(Phi = 0), m/s
    double velocity_ratio = 0.0;        // u / c(0)
    double plateau_ratio = 0.0;         // c / c(0) behind the front
    double horizon_flux = 0.0;          // Phi0 at the first horizon; NaN if none
};

[[nodiscard]] Fig2Result reproduce_fig2(const config::Setup& setup);
[[nodiscard]] Fig2Result reproduce_fig2();

/// xi_m,flux_phi0,c_over_c0,u_over_c0
void write_fig2_csv(const Fig2Result& result, std::ostream& out);
/// xi_m,kind,velocity_gradient_per_s,temperature_K,power_W
void write_fig2_horizons_csv(const Fig2Result& result, std::ostream& out);
[[nodiscard]] std::string fig2_svg(const Fig2Result& result);

// Array impedance against flux ------------------------------------------------

struct ImpedanceCurve {
    double ground_capacitance = 0.0;  // F
    std::vector<double> flux;         // Phi0
    std::vector<double> ratio;        // Z_A / R_Q
};

struct Fig3Result {
    double critical_current = 0.0;
    std::vector<ImpedanceCurve> curves;
};

inline const std::vector<double> kFig3Capacitances{1e-16, 5e-17, 1e-17, 5e-18};

/// Z_A/R_Q on Phi/Phi0 = 0, 0.005, ..., 0.49 for each capacitance.
[[nodiscard]] Fig3Result reproduce_fig3(double critical_current = 2e-6,
                                        const std::vector<double>& capacitances = kFig3Capacitances);

/// ground_capacitance_F,flux_phi0,za_over_rq
void write_fig3_csv(const Fig3Result& result, std::ostream& out);
[[nodiscard]] std::string fig3_svg(const Fig3Result& result);

// Temperature and photon budget ----------------------------------------------

struct Comparison {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    [[nodiscard]] bool pass() const { return value >= lower && value <= upper; }
};

struct BudgetReport {
    double velocity_gradient = 0.0;  // 1/s at t = 0
    double temperature = 0.0;        // K at t = 0
    double power = 0.0;              // W at t = 0
    double broadening_rate = 0.0;    // 1/m
    double decay_ratio = 0.0;        // T_H after reference_cells / T_H(0)
    std::size_t reference_cells = 0;
    geometry::PhotonBudget photons;
    std::vector<Comparison> comparisons;

    [[nodiscard]] bool all_pass() const;
};

[[nodiscard]] BudgetReport temperature_budget(const config::Setup& setup, std::size_t reference_cells = 1000);
[[nodiscard]] BudgetReport temperature_budget();

/// t_s,horizon_xi_m,velocity_gradient_per_s,temperature_K,power_W
void write_budget_csv(const BudgetReport& report, std::ostream& out);

// Wavepacket trapping -----------------------------------------------------------

struct TrappingScenario {
    config::Setup setup;
    bool with_pulse = true;          // false: uniform unbiased line, no horizon
    std::size_t n_cells = 1500;
    double front_cells = 300.0;      // front position at t = 0, in cells
    double separation_cells = 150.0; // packet start distance from the horizon
    double sigma_cells = 20.0;
    double ka = 0.1;
    double traversals = 5.0;
    double courant_fraction = 0.2;
    std::size_t record_every = 10;
};

[[nodiscard]] TrappingScenario default_trapping_scenario();

struct CentroidSample {
    double t = 0.0;
    double x = 0.0;   // lab frame, m
    double xi = 0.0;  // x - u t, m
};

struct PacketOutcome {
    std::string label;
    int direction = +1;          // lab-frame direction of travel
    double start_offset = 0.0;   // xi - xi_h at t = 0, m
    double lab_speed = 0.0;      // group velocity in its starting region, m/s
    double window = 0.0;         // traversals * separation / lab_speed, s
    bool crossed = false;
    double crossing_time = 0.0;  // s; meaningful when crossed
    std::vector<CentroidSample> trace;
};

struct TrappingResult {
    double velocity = 0.0;         // pulse velocity u, 0 without a pulse
    double horizon_position = 0.0; // xi_h, m (reference point without a pulse)
    std::vector<PacketOutcome> packets;  // [0] starts behind and moves forward, [1] ahead and moves back

    /// Behind-forward packet trapped and ahead-backward packet crossed.
    [[nodiscard]] bool one_way() const;
};

[[nodiscard]] TrappingResult wavepacket_trapping(const TrappingScenario& scenario);

/// packet,t_s,x_m,xi_m,xi_minus_horizon_m
void write_trapping_csv(const TrappingResult& result, std::ostream& out);

// Parameter sweeps --------------------------------------------------------------

enum class SweepOutput { HawkingTemperature, ImpedanceRatio, Velocity, HorizonCount, PhotonCount };

/// Column names: T_H_K, ZA_over_RQ, c_m_s, horizon_count, photon_count.
[[nodiscard]] const char* to_string(SweepOutput output) noexcept;
/// Throws ConfigError for an unknown name.
[[nodiscard]] SweepOutput parse_sweep_output(std::string_view name);

struct SweepAxis {
    std::string path;  // dotted configuration key, e.g. "pulse.dc_offset_phi0"
    std::vector<double> values;
};

struct SweepSpec {
    config::RunConfig base;
    std::vector<SweepAxis> axes;  // one or two
    std::vector<SweepOutput> outputs;
};

/// Throws ConfigError unless there are 1-2 axes with non-empty value lists,
/// resolvable paths, and at least one output.
void validate(const SweepSpec& spec);

/// {"base": {...configuration...}, "axes": [{"path": ..., "values": [...]}], "outputs": [...]}.
/// A missing "base" falls back to the given configuration.
[[nodiscard]] SweepSpec parse_sweep_spec(std::string_view text, const config::RunConfig& fallback_base = {});

struct SweepRow {
    std::vector<double> coordinates;  // one per axis
    std::vector<double> values;       // one per output; NaN when the point failed
    std::string error;                // empty on success
};

struct SweepResult {
    std::vector<std::string> axis_paths;
    std::vector<SweepOutput> outputs;
    std::vector<SweepRow> rows;  // first axis slowest
};

/// Evaluates every grid point on up to `workers` threads. Row order and
/// contents do not depend on the worker count. Point failures are recorded in
/// the row; a grid point with no black horizon reports T_H = 0 and no photons.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec, std::size_t workers = 1);

/// Evaluates the requested outputs for one configuration; throws on failure.
[[nodiscard]] std::vector<double> evaluate_point(const config::RunConfig& config,
                                                 const std::vector<SweepOutput>& outputs);

/// <axis paths...>,<outputs...>,error
void write_sweep_csv(const SweepResult& result, std::ostream& out);

}  // namespace squid_horizon::experiments
