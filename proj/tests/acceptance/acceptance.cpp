// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "squid_horizon/circuit.hpp"
#include "squid_horizon/config.hpp"
#include "squid_horizon/constants.hpp"
#include "squid_horizon/dispersion.hpp"
#include "squid_horizon/experiments.hpp"
#include "squid_horizon/geometry.hpp"
#include "squid_horizon/lattice.hpp"
#include "squid_horizon/squid_dynamics.hpp"

using namespace squid_horizon;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), format, args...);
    return buf;
}

circuit::SquidParams squid() {
    circuit::SquidParams s;
    s.junction.critical_current = 2e-6;
    s.junction.capacitance = circuit::capacitance_for_plasma_frequency(2e-6, 2.0 * kPi * 1e12);
    s.loop_inductance = 1e-11;
    return s;
}

circuit::ArrayParams array(std::size_t n) { return {n, 0.25e-6, 5e-17, 50.0}; }

double unit_time(double flux_fraction = 0.0) {
    const auto s = squid();
    return array(1).cell_length /
           circuit::cell_velocity(array(1), s, circuit::flux_from_fraction(flux_fraction));
}

std::vector<double> smooth_field(std::mt19937_64& g, std::size_t n) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2.0 * kPi);
    std::vector<double> v(n, 0.0);
    for (int mode = 1; mode <= 6; ++mode) {
        const double a = amp(g), p = phase(g);
        for (std::size_t i = 0; i < n; ++i) v[i] += a * std::sin(0.02 * mode * static_cast<double>(i) + p);
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

bias::FluxPulse moving_pulse(double front) {
    bias::FluxPulse p;
    p.amplitude = 0.2;
    p.velocity = 0.95 * circuit::cell_velocity(array(1), squid(), 0.0);
    p.steepness = 4e5;
    p.front_position = front;
    return p;
}

// 1 ----------------------------------------------------------------------------
Outcome velocity_estimate() {
    const double c = circuit::cell_velocity(array(1), squid(), 0.0);
    const double c0 = constants::vacuum_light_speed;
    return {c >= c0 / 120.0 && c <= c0 / 60.0, fmt("c = %.4e m/s = c0/%.2f", c, c0 / c)};
}

// 2 ----------------------------------------------------------------------------
Outcome hawking_temperature() {
    const double gradient = config::gradient_cap(squid());
    const double t = geometry::hawking_temperature(gradient) * 1e3;
    const double t_profile = experiments::reproduce_fig2().horizons.at(0).temperature * 1e3;
    const bool pass = std::abs(t - 121.0) <= 2.0 && std::abs(t_profile - 121.0) <= 2.0;
    return {pass, fmt("T_H = %.3f mK (cap), %.3f mK (profile horizon)", t, t_profile)};
}

// 3 ----------------------------------------------------------------------------
Outcome photon_budget() {
    const auto r = experiments::temperature_budget();
    const double n = r.photons.count;
    return {n >= 0.7 && n <= 1.3 && std::abs(r.decay_ratio - 0.9) < 1e-3,
            fmt("%.4f photons over %zu cells, T ratio after %zu cells %.4f", n,
                experiments::reference_setup().array.n_cells, r.reference_cells, r.decay_ratio)};
}

// 4 ----------------------------------------------------------------------------
Outcome impedance_curves() {
    const auto r = experiments::reproduce_fig3();
    const double expect[4] = {0.624, 0.883, 1.974, 2.791};
    bool pass = r.curves.size() == 4;
    std::string detail = "Z_A/R_Q(0) =";
    for (std::size_t i = 0; pass && i < 4; ++i) {
        const auto& c = r.curves[i];
        pass = pass && std::abs(c.ratio.front() / expect[i] - 1.0) <= 0.01;
        pass = pass && std::is_sorted(c.ratio.begin(), c.ratio.end()) &&
               std::adjacent_find(c.ratio.begin(), c.ratio.end()) == c.ratio.end();
        pass = pass && c.ratio.back() > 3.0 * c.ratio.front();
        detail += fmt(" %.4f", c.ratio.front());
    }
    const double near = circuit::array_impedance(array(1), squid(), circuit::flux_from_fraction(0.4999));
    pass = pass && near / constants::resistance_quantum > 10.0;
    return {pass, detail + fmt(", at 0.4999 Phi0: %.2f", near / constants::resistance_quantum)};
}

// 5 ----------------------------------------------------------------------------
Outcome velocity_profile() {
    const auto r = experiments::reproduce_fig2();
    const bool pass = r.horizons.size() == 1 && std::abs(r.horizon_flux - 0.1412) <= 0.002 &&
                      std::abs(r.plateau_ratio - 0.8995) <= 1e-3;
    return {pass, fmt("%zu horizon(s), flux %.5f Phi0, plateau %.5f", r.horizons.size(), r.horizon_flux,
                      r.plateau_ratio)};
}

// 6 ----------------------------------------------------------------------------
Outcome packet_speed() {
    const std::size_t n = 4000;
    const auto arr = array(n);
    const auto s = squid();
    const double a = arr.cell_length;
    bool pass = true;
    std::string detail;
    for (double flux : {0.0, 0.2}) {
        lattice::SolverConfig cfg;
        cfg.boundary = lattice::Boundary::Absorbing;
        cfg.record_every = 200;
        cfg.record_fields = false;
        const auto field = bias::FluxField::uniform(flux);
        lattice::Lattice probe(arr, s, field, cfg);
        const auto state = probe.gaussian_packet({1000 * a, 40 * a, 0.05, 1e-6, +1});
        const double c = a / std::sqrt(circuit::josephson_inductance(s, 0.0, circuit::flux_from_fraction(flux)) *
                                       arr.ground_capacitance);
        cfg.n_steps = static_cast<std::size_t>(2000 * a / c / probe.dt());
        lattice::Lattice timed(arr, s, field, cfg);
        const double v = lattice::measure_pulse_speed(lattice::run(timed, state));
        const double expected = flux == 0.0 ? c : circuit::cell_velocity(arr, s, 0.0) *
                                                      std::sqrt(std::cos(kPi * flux));
        const double err = std::abs(v / expected - 1.0);
        pass = pass && err <= 0.01;
        detail += fmt("%sflux %.1f: v/c_expected - 1 = %+.2e", detail.empty() ? "" : ", ", flux, v / expected - 1.0);
    }
    return {pass, detail};
}

// 7 ----------------------------------------------------------------------------
Outcome dispersion_relation() {
    const auto arr = array(4800);
    const auto s = squid();
    const double l = circuit::josephson_inductance(s, 0.0, 0.0);
    const double a = arr.cell_length;
    const std::vector<double> kas{0.05, 0.1, 0.2, 0.3, 2.0};
    std::vector<double> freqs;
    for (double ka : kas) freqs.push_back(dispersion::omega_analytic(ka / a, l, arr.ground_capacitance, a));
    const auto curve = dispersion::measure_dispersion(arr, s, 0.0, freqs);
    bool pass = curve.points.size() == kas.size();
    std::string detail = "rel. error at ka =";
    for (std::size_t i = 0; pass && i < kas.size(); ++i) {
        const auto& p = curve.points[i];
        const double ka = p.k * a;
        pass = pass && p.rel_error <= (ka <= 0.31 ? 0.01 : 0.02);
        detail += fmt(" %.2f:%.1e", ka, p.rel_error);
    }
    return {pass, detail};
}

// 8 ----------------------------------------------------------------------------
Outcome step_reflection() {
    const std::size_t n = 3000;
    const auto arr = array(n);
    const double a = arr.cell_length;
    lattice::SolverConfig cfg;
    cfg.boundary = lattice::Boundary::Absorbing;
    lattice::Lattice lat(arr, squid(), bias::FluxField::step(1500 * a, 0.0, 0.2), cfg);
    auto state = lat.gaussian_packet({900 * a, 60 * a, 0.02, 1e-6, +1});
    const double e0 = lat.energy(state);
    const auto steps = static_cast<long>(1200 * lat.unit_time() / lat.dt());
    for (long i = 0; i < steps; ++i) lat.step(state);
    const auto density = lat.energy_density(state);
    const double measured = std::accumulate(density.begin(), density.begin() + 1500, 0.0) / e0;
    const double ratio = 1.0 / std::sqrt(std::cos(kPi * 0.2));  // Z_2 / Z_1
    const double analytic = std::pow((ratio - 1.0) / (ratio + 1.0), 2);
    return {std::abs(measured / analytic - 1.0) <= 0.02,
            fmt("|r|^2 measured %.6f, analytic %.6f", measured, analytic)};
}

// 9 ----------------------------------------------------------------------------
Outcome reduction_validity() {
    auto s = squid();
    s.loop_inductance = 0.01 * constants::flux_quantum / (2.0 * kPi * s.junction.critical_current);
    const double fraction = 0.05;
    const double flux = circuit::flux_from_fraction(fraction);
    const double beta = circuit::beta_L(s);
    double gm = kPi * fraction;
    for (int i = 0; i < 100; ++i) gm = kPi * fraction - 0.5 * beta * std::sin(gm);

    const double wps = circuit::effective_plasma_frequency(s, flux);
    const double dt = 0.002 / circuit::plasma_frequency(s.junction);
    const auto steps = static_cast<std::size_t>(100.0 * 2.0 * kPi / wps / dt);
    const double gamma0 = 0.01;
    circuit::SquidState init;
    init.gamma_plus = gamma0;
    init.gamma_minus = gm;
    const auto zero = circuit::Waveform::constant(0.0);
    const auto phi = circuit::Waveform::constant(flux);
    const auto full = circuit::single_squid_dynamics(s, zero, phi, init, dt, steps, {false, 10});
    const auto reduced = circuit::reduced_junction_dynamics(s, zero, phi, gamma0, 0.0, dt, steps, 10);
    const std::size_t m = std::min(full.size(), reduced.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        worst = std::max(worst, std::abs(full[i].gamma_plus - reduced.samples[i].gamma));
    }
    return {m > 1000 && worst < 1e-3, fmt("beta_L %.3f, max |gamma+ - gamma| %.2e rad over %.0f periods", beta,
                                          worst, steps * dt * wps / (2.0 * kPi))};
}

// 10 ---------------------------------------------------------------------------
Outcome property_suite() {
    std::mt19937_64 g(0x5eed0010ULL);
    const auto s = squid();
    std::string detail;
    bool pass = true;

    {
        const auto arr = array(400);
        lattice::SolverConfig cfg;
        cfg.courant_fraction = 0.5;
        lattice::Lattice lat(arr, s, bias::FluxField::step(100 * arr.cell_length, 0.0, 0.3), cfg);
        auto st = lat.make_state(smooth_field(g, 400), smooth_field(g, 400));
        const double e0 = lat.energy(st);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            lat.step(st);
            worst = std::max(worst, std::abs(lat.energy(st) - e0) / e0);
        }
        pass = pass && worst < 1e-6;
        detail += fmt("drift %.1e", worst);
    }
    {
        const std::size_t n = 600;
        const auto arr = array(n);
        lattice::SolverConfig cfg;
        cfg.boundary = lattice::Boundary::Absorbing;
        lattice::Lattice lat(arr, s, bias::FluxField::moving(moving_pulse(2e-5)), cfg);
        const auto a1 = smooth_field(g, n), r1 = smooth_field(g, n), a2 = smooth_field(g, n), r2 = smooth_field(g, n);
        const double alpha = 1.7;
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
        const double scale = std::max({max_abs(s1.A), alpha * max_abs(s2.A), max_abs(s3.A)});
        const double residual = max_abs_diff(combo, s3.A) / scale;
        pass = pass && residual < 1e-12;
        detail += fmt(", superposition %.1e", residual);
    }
    {
        const std::size_t n = 400;
        const auto arr = array(n);
        const auto field = bias::FluxField::moving(moving_pulse(100 * arr.cell_length));
        std::vector<double> a0(n), r0(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = (static_cast<double>(i) - 150.0) / 15.0;
            a0[i] = std::exp(-0.5 * d * d);
        }
        const double tau = unit_time();
        std::vector<std::vector<double>> finals;
        for (double cf : {0.4, 0.2, 0.1}) {
            lattice::SolverConfig cfg;
            cfg.dt = cf * tau;
            cfg.courant_fraction = 0.5;
            lattice::Lattice lat(arr, s, field, cfg);
            auto st = lat.make_state(a0, r0);
            const auto steps = std::lround(80.0 * tau / cfg.dt);
            for (long i = 0; i < steps; ++i) lat.step(st);
            finals.push_back(st.A);
        }
        const double order = std::log2(max_abs_diff(finals[0], finals[1]) / max_abs_diff(finals[1], finals[2]));
        pass = pass && order >= 1.9;
        detail += fmt(", order %.3f", order);
    }
    {
        std::uniform_real_distribution<double> speed(1e5, 1e7), ratio(0.0, 2.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double c = speed(g);
            const auto m = geometry::effective_metric(c, ratio(g) * c);
            worst = std::max(worst, std::abs(m.determinant() * c * c + 1.0));
        }
        pass = pass && worst <= 1e-12;
        detail += fmt(", det %.1e", worst);
    }
    {
        experiments::SweepSpec spec;
        spec.axes = {{"pulse.velocity_ratio", {0.85, 0.9, 0.93, 0.95, 0.97, 0.99}},
                     {"pulse.amplitude_phi0", {0.1, 0.2, 0.3, 0.4}}};
        spec.outputs = {experiments::SweepOutput::HawkingTemperature, experiments::SweepOutput::HorizonCount,
                        experiments::SweepOutput::PhotonCount, experiments::SweepOutput::Velocity};
        std::ostringstream one, many;
        experiments::write_sweep_csv(experiments::run_sweep(spec, 1), one);
        experiments::write_sweep_csv(experiments::run_sweep(spec, 4), many);
        const bool same = one.str() == many.str();
        pass = pass && same;
        detail += same ? ", sweep deterministic" : ", sweep differs across worker counts";
    }
    return {pass, detail};
}

// 11 ---------------------------------------------------------------------------
Outcome trapping() {
    const auto r = experiments::wavepacket_trapping(experiments::default_trapping_scenario());
    std::string detail;
    for (const auto& p : r.packets) {
        detail += fmt("%s%s %s", detail.empty() ? "" : ", ", p.label.c_str(), p.crossed ? "crossed" : "held");
        if (p.crossed) detail += fmt(" after %.2f traversal times", p.crossing_time / p.window * 5.0);
    }
    return {r.one_way(), detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"velocity estimate", velocity_estimate},
        {"hawking temperature", hawking_temperature},
        {"photon budget", photon_budget},
        {"impedance curves", impedance_curves},
        {"velocity profile", velocity_profile},
        {"packet propagation", packet_speed},
        {"lattice dispersion", dispersion_relation},
        {"step scattering", step_reflection},
        {"reduced junction model", reduction_validity},
        {"conservation and properties", property_suite},
        {"wavepacket trapping", trapping},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::printf("%s %2zu: %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
