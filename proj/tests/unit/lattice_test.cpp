#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "reference_values.hpp"
#include "squid_horizon/errors.hpp"
#include "squid_horizon/lattice.hpp"

using namespace squid_horizon;
using namespace squid_horizon::lattice;
using doctest::Approx;

namespace {

const auto kSquid = fixtures::reference_squid();

bias::FluxPulse moving_pulse(double front) {
    bias::FluxPulse p;
    p.amplitude = 0.2;
    p.velocity = 0.95 * reference::kVelocityZeroFlux;
    p.steepness = 4e5;
    p.front_position = front;
    return p;
}

std::vector<double> random_smooth(std::mt19937_64& g, std::size_t n) {
    std::vector<double> v(n, 0.0);
    for (int mode = 1; mode <= 6; ++mode) {
        const double amp = fixtures::uniform(g, -1.0, 1.0);
        const double phase = fixtures::uniform(g, 0.0, 6.283);
        for (std::size_t i = 0; i < n; ++i) v[i] += amp * std::sin(0.02 * mode * i + phase);
    }
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double sum_range(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    return std::accumulate(v.begin() + static_cast<long>(lo), v.begin() + static_cast<long>(hi), 0.0);
}

}  // namespace

TEST_CASE("courant condition") {
    const auto array = fixtures::reference_array(100);
    const double tau = std::sqrt(reference::kInductanceZeroFlux * 5e-17);
    SolverConfig cfg;
    Lattice auto_dt(array, kSquid, bias::FluxField::uniform(0.0), cfg);
    CHECK(auto_dt.dt() == Approx(0.2 * tau).epsilon(1e-12));
    CHECK(auto_dt.unit_time() == Approx(tau).epsilon(1e-12));

    cfg.dt = 0.21 * tau;
    try {
        Lattice bad(array, kSquid, bias::FluxField::uniform(0.0), cfg);
        FAIL("expected CourantViolation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CourantViolation);
    }
    cfg.courant_fraction = 0.6;
    CHECK_THROWS_AS(Lattice(array, kSquid, bias::FluxField::uniform(0.0), cfg), Error);
    // a biased line has a larger inductance, hence a larger allowed step
    cfg.courant_fraction = 0.2;
    cfg.dt = 0.21 * tau;
    CHECK_NOTHROW(Lattice(array, kSquid, bias::FluxField::uniform(0.2), cfg));
}

TEST_CASE("static line conserves the leapfrog energy") {
    auto g = fixtures::rng(10);
    const auto array = fixtures::reference_array(400);
    SolverConfig cfg;
    cfg.courant_fraction = 0.5;
    Lattice lat(array, kSquid, bias::FluxField::step(100 * array.cell_length, 0.0, 0.3), cfg);
    auto state = lat.make_state(random_smooth(g, 400), random_smooth(g, 400));
    const double e0 = lat.energy(state);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        lat.step(state);
        if (i % 100 == 0) worst = std::max(worst, std::abs(lat.energy(state) - e0) / e0);
    }
    worst = std::max(worst, std::abs(lat.energy(state) - e0) / e0);
    CHECK(worst < 1e-6);
}

TEST_CASE("mirror symmetry on a reflecting uniform line") {
    auto g = fixtures::rng(11);
    const std::size_t n = 300;
    const auto array = fixtures::reference_array(n);
    Lattice lat(array, kSquid, bias::FluxField::uniform(0.1), {});
    const auto a0 = random_smooth(g, n);
    const auto r0 = random_smooth(g, n);
    std::vector<double> a1(a0.rbegin(), a0.rend()), r1(r0.rbegin(), r0.rend());
    auto s0 = lat.make_state(a0, r0);
    auto s1 = lat.make_state(a1, r1);
    for (int i = 0; i < 2000; ++i) {
        lat.step(s0);
        lat.step(s1);
    }
    std::vector<double> back(s1.A.rbegin(), s1.A.rend());
    CHECK(max_abs_diff(s0.A, back) <= 1e-15 * max_abs(s0.A));
}

TEST_CASE("property: superposition holds on a moving-pulse line") {
    auto g = fixtures::rng(12);
    const std::size_t n = 600;
    const auto array = fixtures::reference_array(n);
    for (int trial = 0; trial < 5; ++trial) {
        SolverConfig cfg;
        cfg.boundary = trial % 2 ? Boundary::Absorbing : Boundary::Reflecting;
        Lattice lat(array, kSquid, bias::FluxField::moving(moving_pulse(fixtures::uniform(g, 0.0, 5e-5))), cfg);
        const auto a1 = random_smooth(g, n), r1 = random_smooth(g, n);
        const auto a2 = random_smooth(g, n), r2 = random_smooth(g, n);
        const double alpha = fixtures::uniform(g, -3.0, 3.0);
        std::vector<double> a3(n), r3(n);
        for (std::size_t i = 0; i < n; ++i) {
            a3[i] = a1[i] + alpha * a2[i];
            r3[i] = r1[i] + alpha * r2[i];
        }
        auto s1 = lat.make_state(a1, r1), s2 = lat.make_state(a2, r2), s3 = lat.make_state(a3, r3);
        for (int i = 0; i < 1000; ++i) {
            lat.step(s1);
            lat.step(s2);
            lat.step(s3);
        }
        std::vector<double> combo(n);
        for (std::size_t i = 0; i < n; ++i) combo[i] = s1.A[i] + alpha * s2.A[i];
        const double scale = std::max({max_abs(s1.A), std::abs(alpha) * max_abs(s2.A), max_abs(s3.A)});
        CHECK(max_abs_diff(combo, s3.A) / scale < 1e-12);
    }
}

TEST_CASE("second-order convergence in dt with a moving pulse") {
    const std::size_t n = 400;
    const auto array = fixtures::reference_array(n);
    const auto field = bias::FluxField::moving(moving_pulse(100 * array.cell_length));
    std::vector<double> a0(n), r0(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (static_cast<double>(i) - 150.0) / 15.0;
        a0[i] = std::exp(-0.5 * d * d);
    }
    const double tau = std::sqrt(reference::kInductanceZeroFlux * 5e-17);
    const double t_end = 80.0 * tau;
    std::vector<std::vector<double>> finals;
    for (double cf : {0.4, 0.2, 0.1}) {
        SolverConfig cfg;
        cfg.dt = cf * tau;
        cfg.courant_fraction = 0.5;
        Lattice lat(array, kSquid, field, cfg);
        auto s = lat.make_state(a0, r0);
        const auto steps = static_cast<int>(std::lround(t_end / cfg.dt));
        for (int i = 0; i < steps; ++i) lat.step(s);
        finals.push_back(s.A);
    }
    const double e1 = max_abs_diff(finals[0], finals[1]);
    const double e2 = max_abs_diff(finals[1], finals[2]);
    const double order = std::log2(e1 / e2);
    MESSAGE("observed order " << order);
    CHECK(order >= 1.9);
}

TEST_CASE("packet travels at the line velocity") {
    const std::size_t n = 2000;
    const auto array = fixtures::reference_array(n);
    for (double flux : {0.0, 0.2}) {
        SolverConfig cfg;
        cfg.boundary = Boundary::Absorbing;
        cfg.record_every = 200;
        cfg.record_fields = false;
        Lattice lat(array, kSquid, bias::FluxField::uniform(flux), cfg);
        const double a = array.cell_length;
        auto s = lat.gaussian_packet({500 * a, 30 * a, 0.05, 1e-6, +1});
        const double c = circuit::cell_velocity(array, kSquid, circuit::flux_from_fraction(flux));
        const double tau = a / c;
        cfg.n_steps = static_cast<std::size_t>(900 * tau / lat.dt());
        Lattice timed(array, kSquid, bias::FluxField::uniform(flux), cfg);
        const auto traj = run(timed, s);
        const double v = measure_pulse_speed(traj);
        CHECK(v / (c * std::cos(0.025)) == Approx(1.0).epsilon(2e-3));
    }
}

TEST_CASE("packet speed needs a localized packet") {
    Trajectory t;
    CHECK_THROWS_AS((void)measure_pulse_speed(t), Error);
    const auto array = fixtures::reference_array(50);
    SolverConfig cfg;
    cfg.n_steps = 10;
    Lattice lat(array, kSquid, bias::FluxField::uniform(0.0), cfg);
    std::vector<double> flat(50, 1.0), rate(50, 0.0);
    const auto traj = run(lat, lat.make_state(flat, rate));
    try {
        (void)measure_pulse_speed(traj);
        FAIL("expected NoPacket");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoPacket);
    }
}

TEST_CASE("reflection off a static flux step") {
    const std::size_t n = 3000;
    const auto array = fixtures::reference_array(n);
    const double a = array.cell_length;
    SolverConfig cfg;
    cfg.boundary = Boundary::Absorbing;
    Lattice lat(array, kSquid, bias::FluxField::step(1500 * a, 0.0, 0.2), cfg);
    auto s = lat.gaussian_packet({900 * a, 60 * a, 0.02, 1e-6, +1});
    const double e0 = lat.energy(s);
    const auto steps = static_cast<int>(1200 * lat.unit_time() / lat.dt());
    for (int i = 0; i < steps; ++i) lat.step(s);
    const auto e = lat.energy_density(s);
    const double reflected = sum_range(e, 0, 1500) / e0;
    MESSAGE("reflected fraction " << reflected);
    CHECK(reflected == Approx(reference::kStepReflection).epsilon(0.02));
}

TEST_CASE("absorbing ends leave less than 1% behind") {
    const std::size_t n = 800;
    const auto array = fixtures::reference_array(n);
    const double a = array.cell_length;
    SolverConfig cfg;
    cfg.boundary = Boundary::Absorbing;
    Lattice lat(array, kSquid, bias::FluxField::uniform(0.1), cfg);
    for (int dir : {+1, -1}) {
        auto s = lat.gaussian_packet({400 * a, 25 * a, 0.1, 1e-6, dir});
        const double e0 = lat.energy(s);
        const auto steps = static_cast<int>(900 * lat.unit_time() / lat.dt());
        for (int i = 0; i < steps; ++i) lat.step(s);
        CHECK(lat.energy(s) / e0 < 1e-2);
    }
}

TEST_CASE("driven boundary launches the discrete wavelength") {
    const std::size_t n = 1200;
    const auto array = fixtures::reference_array(n);
    SolverConfig cfg;
    cfg.boundary = Boundary::DrivenLeftAbsorbingRight;
    cfg.probes = {300, 301};
    Lattice lat(array, kSquid, bias::FluxField::uniform(0.0), cfg);
    const double omega = 0.3 / lat.unit_time();
    const auto drive = inject_sine(lat, 1e-6, omega);
    CHECK(drive.wavenumber == Approx(2.0 * std::asin(std::sin(0.5 * omega * lat.dt()) * lat.unit_time() / lat.dt())));
    lat.set_drive(drive);
    auto s = lat.zero_state();
    const auto steps = static_cast<int>(1100 * lat.unit_time() / lat.dt());
    for (int i = 0; i < steps; ++i) lat.step(s);
    // steady incident wave: A_n = amp sin(omega t - k n) everywhere behind the wavefront
    double worst = 0.0;
    for (std::size_t i = 0; i < 600; ++i) {
        const double expect = 1e-6 * std::sin(omega * s.t - drive.wavenumber * static_cast<double>(i));
        worst = std::max(worst, std::abs(s.A[i] - expect));
    }
    CHECK(worst / 1e-6 < 1e-2);
}

TEST_CASE("drive errors") {
    const auto array = fixtures::reference_array(100);
    Lattice reflecting(array, kSquid, bias::FluxField::uniform(0.0), {});
    CHECK_THROWS_AS(reflecting.set_drive({1.0, 1.0, 0.1, 1.0}), Error);
    try {
        (void)inject_sine(reflecting, 1e-6, 2.1 / reflecting.unit_time());
        FAIL("expected BandLimit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BandLimit);
    }
}

TEST_CASE("current-dependent inductance slows a strong packet") {
    const std::size_t n = 1500;
    const auto array = fixtures::reference_array(n);
    const double a = array.cell_length;
    double speeds[2];
    for (int nl = 0; nl < 2; ++nl) {
        SolverConfig cfg;
        cfg.boundary = Boundary::Absorbing;
        cfg.current_dependent_inductance = nl == 1;
        cfg.record_every = 100;
        cfg.record_fields = false;
        cfg.n_steps = 3000;
        Lattice lat(array, kSquid, bias::FluxField::uniform(0.0), cfg);
        // peak current below 0.4 I_c^s: |dA/dt| <= amp (ka + 0.61 / sigma_cells) / tau
        const double tau = lat.unit_time();
        const double amp = 0.4 * 4e-6 * tau / (5e-17 * (0.05 + 0.61 / 30.0));
        speeds[nl] = measure_pulse_speed(run(lat, lat.gaussian_packet({400 * a, 30 * a, 0.05, amp, +1})));
    }
    CHECK(speeds[1] < speeds[0]);
}

TEST_CASE("energy density is the per-node share of the total") {
    auto g = fixtures::rng(13);
    const auto array = fixtures::reference_array(100);
    Lattice lat(array, kSquid, bias::FluxField::uniform(0.0), {});
    const auto s = lat.make_state(random_smooth(g, 100), random_smooth(g, 100));
    const auto e = lat.energy_density(s);
    CHECK(std::accumulate(e.begin(), e.end(), 0.0) == Approx(lat.energy(s)).epsilon(1e-14));
    CHECK(lat.voltages(s)[0] == 0.0);
    CHECK(lat.voltages(s)[5] == Approx(s.A[5] - s.A[4]));
}

TEST_CASE("trajectory output formats") {
    const auto array = fixtures::reference_array(4);
    SolverConfig cfg;
    cfg.n_steps = 3;
    cfg.record_every = 2;
    Lattice lat(array, kSquid, bias::FluxField::uniform(0.0), cfg);
    std::vector<double> a0{0.0, 1e-6, 2e-6, 0.0}, r0(4, 0.0);
    const auto traj = run(lat, lat.make_state(a0, r0));
    REQUIRE(traj.records.size() == 3);  // t = 0, step 2, last step

    std::ostringstream csv;
    write_csv(traj, csv);
    const auto text = csv.str();
    CHECK(text.rfind("t,node,A,I,V\r\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 * 4);

    std::stringstream bin;
    write_binary(traj, bin);
    CHECK(bin.str().size() == 5 + 16 + 3 * 8 * (1 + 3 * 4));
    const auto dump = read_binary(bin);
    CHECK(dump.n_nodes == 4);
    CHECK(dump.n_records == 3);
    CHECK(dump.values[0] == traj.records[0].t);
    CHECK(dump.values[1 + 2] == a0[2]);
    CHECK(dump.values[13 + 1 + 1] == traj.records[1].A[1]);

    std::stringstream junk("SQHZ0xxxxxxxxxxxxxxxx");
    CHECK_THROWS_AS((void)read_binary(junk), Error);
}

TEST_CASE("single-step helper matches the lattice") {
    auto g = fixtures::rng(14);
    const auto array = fixtures::reference_array(50);
    const auto field = bias::FluxField::uniform(0.1);
    Lattice lat(array, kSquid, field, {});
    auto s = lat.make_state(random_smooth(g, 50), random_smooth(g, 50));
    const auto next = step(s, array, kSquid, field, lat.dt());
    lat.step(s);
    CHECK(next.A == s.A);
    CHECK(next.t == s.t);
}
