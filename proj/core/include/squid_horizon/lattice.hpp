#pragma once

// Time-domain solver for the discrete array
//
//     d/dt (L_n C0 dA_n/dt) = A_{n+1} - 2 A_n + A_{n-1},
//
// with I_n = -C0 dA_n/dt and V_n = A_n - A_{n-1}. The update is leapfrog on
// (A, q), q_n = L_n C0 dA_n/dt, with q living half a step behind A and L
// evaluated from the flux field at the half step.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "squid_horizon/bias.hpp"
#include "squid_horizon/circuit.hpp"

namespace squid_horizon::lattice {

enum class Boundary {
    Reflecting,
    Absorbing,
    DrivenLeftAbsorbingRight,
};

struct SolverConfig {
    double dt = 0.0;  // s; 0 selects courant_fraction * sqrt(L_min C0)
    std::size_t n_steps = 0;
    double courant_fraction = 0.2;
    Boundary boundary = Boundary::Reflecting;
    std::size_t record_every = 1;
    bool current_dependent_inductance = false;
    bool record_fields = true;
    std::vector<std::size_t> probes;
};

struct LatticeState {
    double t = 0.0;
    std::vector<double> A;  // V, at t
    std::vector<double> q;  // V s, at t - dt/2
};

/// Left-boundary source: an incident wave amplitude * sin(omega t - k n)
/// switched on over ramp_time, injected through a transparent boundary.
struct SineDrive {
    double amplitude = 0.0;   // V
    double frequency = 0.0;   // rad/s
    double wavenumber = 0.0;  // rad per cell, from the fully discrete dispersion relation
    double ramp_time = 0.0;   // s
};

struct PacketSpec {
    double center = 0.0;  // m
    double sigma = 0.0;   // m, envelope standard deviation
    double ka = 0.1;      // carrier wavenumber times cell length
    double amplitude = 1.0;
    int direction = +1;  // +1 towards increasing x
};

class Lattice {
public:
    Lattice(const circuit::ArrayParams& array, const circuit::SquidParams& squid, bias::FluxField field,
            SolverConfig config);

    [[nodiscard]] std::size_t size() const { return array_.n_cells; }
    [[nodiscard]] double dt() const { return dt_; }
    /// sqrt(L(0,0) C0): one cell transit time of the unbiased line.
    [[nodiscard]] double unit_time() const { return unit_time_; }
    [[nodiscard]] double base_inductance() const { return base_inductance_; }
    [[nodiscard]] const SolverConfig& config() const { return config_; }
    [[nodiscard]] const circuit::ArrayParams& array() const { return array_; }
    [[nodiscard]] const circuit::SquidParams& squid() const { return squid_; }
    [[nodiscard]] const bias::FluxField& field() const { return field_; }
    [[nodiscard]] double position(std::size_t node) const;

    [[nodiscard]] LatticeState zero_state() const;
    /// State with A(t0) = potential and dA/dt(t0) = rate; q is pulled back half a step.
    [[nodiscard]] LatticeState make_state(std::span<const double> potential, std::span<const double> rate,
                                          double t0 = 0.0) const;
    [[nodiscard]] LatticeState gaussian_packet(const PacketSpec& packet) const;

    /// Requires the DrivenLeftAbsorbingRight boundary.
    void set_drive(const SineDrive& drive);

    /// Advances by one dt. Throws NonFinite on overflow.
    void step(LatticeState& state);

    /// Zero-current inductance per node at time t.
    [[nodiscard]] std::vector<double> inductances(double t) const;
    [[nodiscard]] std::vector<double> currents(const LatticeState& state) const;
    [[nodiscard]] std::vector<double> voltages(const LatticeState& state) const;
    /// Per-node share of sum q_-q_+/(2L) + C0 V^2/2, the quadratic form the
    /// leapfrog conserves exactly for static L and reflecting ends.
    [[nodiscard]] std::vector<double> energy_density(const LatticeState& state) const;
    [[nodiscard]] double energy(const LatticeState& state) const;

private:
    void fill_inductance(double t, const std::vector<double>* q, std::vector<double>& out) const;
    void apply_absorbing(LatticeState& state, const std::vector<double>& old_a, double t_new, bool left_driven);

    circuit::ArrayParams array_;
    circuit::SquidParams squid_;
    bias::FluxField field_;
    SolverConfig config_;
    double base_inductance_ = 0.0;
    double unit_time_ = 0.0;
    double dt_ = 0.0;
    std::optional<SineDrive> drive_;
    double drive_kappa_ = 0.0;

    std::vector<double> inductance_;  // at the current half step, units of H
    std::vector<double> scratch_;
};

/// Descriptor for a steady left-boundary sinusoid. Throws BandLimit when
/// frequency >= 2 / sqrt(L C0) at the boundary cell.
[[nodiscard]] SineDrive inject_sine(const Lattice& lattice, double amplitude, double frequency);

struct Record {
    double t = 0.0;
    double energy = 0.0;
    std::vector<double> A;
    std::vector<double> I;
    std::vector<double> V;
    std::vector<double> energy_density;
    std::vector<double> probes;  // A at config.probes
};

struct Trajectory {
    std::size_t n_nodes = 0;
    double cell_length = 0.0;
    std::vector<std::size_t> probe_nodes;
    std::vector<Record> records;
};

/// Steps config.n_steps times from initial, recording every record_every steps
/// (plus the first and last state).
[[nodiscard]] Trajectory run(Lattice& lattice, LatticeState initial);
[[nodiscard]] Trajectory run(const LatticeState& initial, const circuit::ArrayParams& array,
                             const circuit::SquidParams& squid, const bias::FluxField& field,
                             const SolverConfig& config);

/// One reflecting-boundary step with an explicit dt.
[[nodiscard]] LatticeState step(const LatticeState& state, const circuit::ArrayParams& array,
                                const circuit::SquidParams& squid, const bias::FluxField& field, double dt);

/// Energy-weighted centre of a record, m.
[[nodiscard]] double energy_centroid(const Record& record, double cell_length);

/// Least-squares slope of the energy centroid against time. Throws NoPacket
/// when there are fewer than two records or the energy is spread over more
/// than half the line (participation ratio > 0.5).
[[nodiscard]] double measure_pulse_speed(const Trajectory& trajectory);

/// CSV with header t,node,A,I,V; one row per node per record.
void write_csv(const Trajectory& trajectory, std::ostream& out);

/// Little-endian dump: magic "SQHZ1", uint64 N, uint64 n_records, then per
/// record the float64 values t, A[N], I[N], V[N].
void write_binary(const Trajectory& trajectory, std::ostream& out);

struct BinaryDump {
    std::uint64_t n_nodes = 0;
    std::uint64_t n_records = 0;
    std::vector<double> values;
};

[[nodiscard]] BinaryDump read_binary(std::istream& in);

}  // namespace squid_horizon::lattice
