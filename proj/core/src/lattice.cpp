#include "squid_horizon/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "squid_horizon/csv.hpp"
#include "squid_horizon/errors.hpp"

namespace squid_horizon::lattice {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCourantSlack = 1.0 + 1e-12;
constexpr char kMagic[5] = {'S', 'Q', 'H', 'Z', '1'};

// Neumann (mirror) discrete Laplacian at node n.
inline double laplacian(const std::vector<double>& a, std::size_t n) {
    const std::size_t last = a.size() - 1;
    if (n == 0) return a[1] - a[0];
    if (n == last) return a[last - 1] - a[last];
    return (a[n + 1] + a[n - 1]) - 2.0 * a[n];
}

// First-order one-way (Mur) coefficient for a non-dispersive wave.
double mur_coefficient(double dt, double inductance, double capacitance) {
    const double r = dt / std::sqrt(inductance * capacitance);
    return (r - 1.0) / (r + 1.0);
}

// Wavenumber (rad per cell) that the leapfrog update propagates at omega.
double discrete_wavenumber(double omega, double dt, double inductance, double capacitance) {
    const double s = std::sqrt(inductance * capacitance) * std::sin(0.5 * omega * dt) / dt;
    if (!(s < 1.0)) return std::numeric_limits<double>::quiet_NaN();
    return 2.0 * std::asin(s);
}

// One-way boundary coefficient exact for the discrete wave at (omega dt, k).
double tuned_coefficient(double omega_dt, double k) {
    return std::sin(0.5 * (omega_dt - k)) / std::sin(0.5 * (omega_dt + k));
}

double drive_ramp(const SineDrive& d, double t) {
    if (t <= 0.0) return 0.0;
    if (t >= d.ramp_time) return 1.0;
    const double s = std::sin(0.5 * kPi * t / d.ramp_time);
    return s * s;
}

double incident(const SineDrive& d, double node, double t) {
    return d.amplitude * drive_ramp(d, t) * std::sin(d.frequency * t - d.wavenumber * node);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
    out.write(b, 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) raise(ErrorCode::ParseError, "truncated binary dump");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

}  // namespace

Lattice::Lattice(const circuit::ArrayParams& array, const circuit::SquidParams& squid, bias::FluxField field,
                 SolverConfig config)
    : array_(array), squid_(squid), field_(std::move(field)), config_(std::move(config)) {
    circuit::validate(array_);
    circuit::validate(squid_);
    if (!(config_.courant_fraction > 0.0) || config_.courant_fraction > 0.5) {
        raise(ErrorCode::CourantViolation, "courant_fraction must lie in (0, 0.5]");
    }
    for (std::size_t p : config_.probes) {
        if (p >= array_.n_cells) raise(ErrorCode::InvalidArgument, "probe node outside the line");
    }
    base_inductance_ = circuit::josephson_inductance(squid_, 0.0, 0.0);
    unit_time_ = std::sqrt(base_inductance_ * array_.ground_capacitance);

    // Smallest inductance sits at the smallest |flux| the field can reach.
    const double lo = field_.min_fraction();
    const double hi = field_.max_fraction();
    const double smallest = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
    const double l_min = circuit::josephson_inductance(squid_, 0.0, circuit::flux_from_fraction(smallest));
    const double dt_max = config_.courant_fraction * std::sqrt(l_min * array_.ground_capacitance);
    if (config_.dt == 0.0) {
        dt_ = dt_max;
    } else if (!(config_.dt > 0.0) || config_.dt > dt_max * kCourantSlack) {
        std::ostringstream os;
        os << "dt = " << config_.dt << " s exceeds " << config_.courant_fraction << " sqrt(L_min C0) = " << dt_max
           << " s";
        raise(ErrorCode::CourantViolation, os.str());
    } else {
        dt_ = config_.dt;
    }
    config_.dt = dt_;
    config_.record_every = std::max<std::size_t>(config_.record_every, 1);

    inductance_.resize(array_.n_cells);
    fill_inductance(0.0, nullptr, inductance_);
}

double Lattice::position(std::size_t node) const { return (static_cast<double>(node) + 0.5) * array_.cell_length; }

void Lattice::fill_inductance(double t, const std::vector<double>* q, std::vector<double>& out) const {
    for (std::size_t n = 0; n < array_.n_cells; ++n) {
        const double flux = field_.flux(position(n), t);
        double current = 0.0;
        if (q && config_.current_dependent_inductance) current = -(*q)[n] / out[n];
        out[n] = circuit::josephson_inductance(squid_, current, flux);
    }
}

std::vector<double> Lattice::inductances(double t) const {
    std::vector<double> out(array_.n_cells);
    fill_inductance(t, nullptr, out);
    return out;
}

LatticeState Lattice::zero_state() const {
    return {0.0, std::vector<double>(array_.n_cells, 0.0), std::vector<double>(array_.n_cells, 0.0)};
}

LatticeState Lattice::make_state(std::span<const double> potential, std::span<const double> rate, double t0) const {
    if (potential.size() != array_.n_cells || rate.size() != array_.n_cells) {
        raise(ErrorCode::InvalidArgument, "initial data length must equal the number of cells");
    }
    LatticeState s;
    s.t = t0;
    s.A.assign(potential.begin(), potential.end());
    s.q.resize(array_.n_cells);
    const auto l = inductances(t0);
    for (std::size_t n = 0; n < array_.n_cells; ++n) {
        s.q[n] = l[n] * array_.ground_capacitance * rate[n] - 0.5 * dt_ * laplacian(s.A, n);
    }
    return s;
}

LatticeState Lattice::gaussian_packet(const PacketSpec& packet) const {
    if (!(packet.sigma > 0.0)) raise(ErrorCode::InvalidArgument, "packet width must be > 0");
    const std::size_t n_cells = array_.n_cells;
    std::vector<double> a(n_cells), rate(n_cells);
    const auto l = inductances(0.0);
    const double k = packet.ka / array_.cell_length;
    const double dir = packet.direction >= 0 ? 1.0 : -1.0;
    for (std::size_t n = 0; n < n_cells; ++n) {
        const double x = position(n);
        const double d = x - packet.center;
        const double env = packet.amplitude * std::exp(-0.5 * d * d / (packet.sigma * packet.sigma));
        const double denv = -d / (packet.sigma * packet.sigma) * env;
        const double tau = std::sqrt(l[n] * array_.ground_capacitance);
        const double omega = 2.0 / dt_ * std::asin(std::min(1.0, dt_ / tau * std::sin(0.5 * packet.ka)));
        const double vg = array_.cell_length / tau * std::cos(0.5 * packet.ka);
        a[n] = env * std::cos(k * x);
        rate[n] = dir * (omega * env * std::sin(k * x) - vg * denv * std::cos(k * x));
    }
    return make_state(a, rate, 0.0);
}

void Lattice::set_drive(const SineDrive& drive) {
    if (config_.boundary != Boundary::DrivenLeftAbsorbingRight) {
        raise(ErrorCode::InvalidArgument, "a sine drive needs the driven-left boundary");
    }
    drive_ = drive;
    drive_kappa_ = tuned_coefficient(drive.frequency * dt_, drive.wavenumber);
}

void Lattice::apply_absorbing(LatticeState& state, const std::vector<double>& old_a, double t_new, bool left_driven) {
    auto& a = state.A;
    const std::size_t last = a.size() - 1;
    const double c0 = array_.ground_capacitance;

    const double kr = drive_ ? tuned_coefficient(drive_->frequency * dt_,
                                                 discrete_wavenumber(drive_->frequency, dt_, inductance_[last], c0))
                             : mur_coefficient(dt_, inductance_[last], c0);
    a[last] = old_a[last - 1] + kr * (a[last - 1] - old_a[last]);
    state.q[last] = inductance_[last] * c0 * (a[last] - old_a[last]) / dt_;

    if (left_driven && drive_) {
        const double t_old = t_new - dt_;
        const auto& d = *drive_;
        const double s_new = (old_a[1] - incident(d, 1.0, t_old)) +
                             drive_kappa_ * ((a[1] - incident(d, 1.0, t_new)) - (old_a[0] - incident(d, 0.0, t_old)));
        a[0] = incident(d, 0.0, t_new) + s_new;
    } else {
        const double kl = mur_coefficient(dt_, inductance_[0], c0);
        a[0] = old_a[1] + kl * (a[1] - old_a[0]);
    }
    state.q[0] = inductance_[0] * c0 * (a[0] - old_a[0]) / dt_;
}

void Lattice::step(LatticeState& state) {
    auto& a = state.A;
    auto& q = state.q;
    const std::size_t n_cells = a.size();
    if (n_cells != array_.n_cells || q.size() != n_cells) {
        raise(ErrorCode::InvalidArgument, "state does not match the lattice size");
    }
    if (!field_.is_static() || config_.current_dependent_inductance) {
        fill_inductance(state.t + 0.5 * dt_, &q, inductance_);
    }

    q[0] += dt_ * (a[1] - a[0]);
    for (std::size_t n = 1; n + 1 < n_cells; ++n) q[n] += dt_ * ((a[n + 1] + a[n - 1]) - 2.0 * a[n]);
    q[n_cells - 1] += dt_ * (a[n_cells - 2] - a[n_cells - 1]);

    const bool absorbing = config_.boundary != Boundary::Reflecting;
    if (absorbing) scratch_.assign(a.begin(), a.end());

    const double drift = dt_ / array_.ground_capacitance;
    double checksum = 0.0;
    for (std::size_t n = 0; n < n_cells; ++n) {
        a[n] += drift * q[n] / inductance_[n];
        checksum += a[n];
    }
    state.t += dt_;

    if (absorbing) apply_absorbing(state, scratch_, state.t, config_.boundary == Boundary::DrivenLeftAbsorbingRight);
    if (!std::isfinite(checksum)) raise(ErrorCode::NonFinite, "lattice state overflowed");
}

std::vector<double> Lattice::currents(const LatticeState& state) const {
    std::vector<double> out(state.q.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = -state.q[n] / inductance_[n];
    return out;
}

std::vector<double> Lattice::voltages(const LatticeState& state) const {
    std::vector<double> out(state.A.size(), 0.0);
    for (std::size_t n = 1; n < out.size(); ++n) out[n] = state.A[n] - state.A[n - 1];
    return out;
}

std::vector<double> Lattice::energy_density(const LatticeState& state) const {
    const auto& a = state.A;
    std::vector<double> out(a.size());
    const double c0 = array_.ground_capacitance;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double q_next = state.q[n] + dt_ * laplacian(a, n);
        const double v = n > 0 ? a[n] - a[n - 1] : 0.0;
        out[n] = 0.5 * state.q[n] * q_next / inductance_[n] + 0.5 * c0 * v * v;
    }
    return out;
}

double Lattice::energy(const LatticeState& state) const {
    const auto e = energy_density(state);
    return std::accumulate(e.begin(), e.end(), 0.0);
}

SineDrive inject_sine(const Lattice& lattice, double amplitude, double frequency) {
    const double l = lattice.inductances(0.0).front();
    const double c0 = lattice.array().ground_capacitance;
    const double band_edge = 2.0 / std::sqrt(l * c0);
    const double k = discrete_wavenumber(frequency, lattice.dt(), l, c0);
    if (!(frequency > 0.0) || frequency >= band_edge || !std::isfinite(k)) {
        std::ostringstream os;
        os << "drive frequency " << frequency << " rad/s outside the pass band (0, " << band_edge << ")";
        raise(ErrorCode::BandLimit, os.str());
    }
    return {amplitude, frequency, k, 4.0 * 2.0 * kPi / frequency};
}

Trajectory run(Lattice& lattice, LatticeState initial) {
    const auto& cfg = lattice.config();
    Trajectory traj;
    traj.n_nodes = lattice.size();
    traj.cell_length = lattice.array().cell_length;
    traj.probe_nodes = cfg.probes;
    traj.records.reserve(cfg.n_steps / cfg.record_every + 2);

    auto record = [&](const LatticeState& s) {
        Record r;
        r.t = s.t;
        r.energy_density = lattice.energy_density(s);
        r.energy = std::accumulate(r.energy_density.begin(), r.energy_density.end(), 0.0);
        if (cfg.record_fields) {
            r.A = s.A;
            r.I = lattice.currents(s);
            r.V = lattice.voltages(s);
        }
        for (std::size_t p : cfg.probes) r.probes.push_back(s.A[p]);
        traj.records.push_back(std::move(r));
    };

    record(initial);
    for (std::size_t i = 1; i <= cfg.n_steps; ++i) {
        lattice.step(initial);
        if (i % cfg.record_every == 0 || i == cfg.n_steps) record(initial);
    }
    return traj;
}

Trajectory run(const LatticeState& initial, const circuit::ArrayParams& array, const circuit::SquidParams& squid,
               const bias::FluxField& field, const SolverConfig& config) {
    Lattice lattice(array, squid, field, config);
    return run(lattice, initial);
}

LatticeState step(const LatticeState& state, const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                  const bias::FluxField& field, double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.courant_fraction = 0.5;
    Lattice lattice(array, squid, field, cfg);
    LatticeState next = state;
    lattice.step(next);
    return next;
}

double energy_centroid(const Record& record, double cell_length) {
    double total = 0.0;
    double moment = 0.0;
    for (std::size_t n = 0; n < record.energy_density.size(); ++n) {
        const double e = std::max(record.energy_density[n], 0.0);
        total += e;
        moment += e * (static_cast<double>(n) + 0.5) * cell_length;
    }
    if (!(total > 0.0)) raise(ErrorCode::NoPacket, "record carries no energy");
    return moment / total;
}

double measure_pulse_speed(const Trajectory& trajectory) {
    if (trajectory.records.size() < 2) raise(ErrorCode::NoPacket, "need at least two records");
    std::vector<double> t, x;
    for (const auto& r : trajectory.records) {
        double sum = 0.0, sum_sq = 0.0;
        for (double e : r.energy_density) {
            const double v = std::max(e, 0.0);
            sum += v;
            sum_sq += v * v;
        }
        if (!(sum > 0.0)) raise(ErrorCode::NoPacket, "record carries no energy");
        const double participation = sum * sum / (static_cast<double>(r.energy_density.size()) * sum_sq);
        if (participation > 0.5) raise(ErrorCode::NoPacket, "energy is not localized");
        t.push_back(r.t);
        x.push_back(energy_centroid(r, trajectory.cell_length));
    }
    const double n = static_cast<double>(t.size());
    const double mt = std::accumulate(t.begin(), t.end(), 0.0) / n;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxy += (t[i] - mt) * (x[i] - mx);
        sxx += (t[i] - mt) * (t[i] - mt);
    }
    return sxy / sxx;
}

void write_csv(const Trajectory& trajectory, std::ostream& out) {
    csv::Writer w(out, {"t", "node", "A", "I", "V"});
    for (const auto& r : trajectory.records) {
        if (r.A.empty()) continue;
        for (std::size_t n = 0; n < trajectory.n_nodes; ++n) {
            w.field(r.t).field(n).field(r.A[n]).field(r.I[n]).field(r.V[n]);
            w.end_row();
        }
    }
}

void write_binary(const Trajectory& trajectory, std::ostream& out) {
    std::uint64_t n_records = 0;
    for (const auto& r : trajectory.records) n_records += r.A.empty() ? 0 : 1;
    out.write(kMagic, sizeof(kMagic));
    put_u64(out, trajectory.n_nodes);
    put_u64(out, n_records);
    for (const auto& r : trajectory.records) {
        if (r.A.empty()) continue;
        put_f64(out, r.t);
        for (double v : r.A) put_f64(out, v);
        for (double v : r.I) put_f64(out, v);
        for (double v : r.V) put_f64(out, v);
    }
}

BinaryDump read_binary(std::istream& in) {
    char magic[sizeof(kMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) raise(ErrorCode::ParseError, "bad magic");
    BinaryDump dump;
    dump.n_nodes = get_u64(in);
    dump.n_records = get_u64(in);
    const std::uint64_t count = dump.n_records * (1 + 3 * dump.n_nodes);
    dump.values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) dump.values.push_back(std::bit_cast<double>(get_u64(in)));
    return dump;
}

}  // namespace squid_horizon::lattice
