#include "squid_horizon/squid_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "squid_horizon/constants.hpp"
#include "squid_horizon/errors.hpp"

namespace squid_horizon::circuit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStepSlack = 1.0 + 1e-12;

using State4 = std::array<double, 4>;  // gamma+, gamma-, dgamma+/dtau, dgamma-/dtau

State4 axpy(const State4& y, double h, const State4& k) {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

bool finite(const State4& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

Waveform Waveform::constant(double value) { return Waveform({value}, 0.0); }

Waveform::Waveform(std::vector<double> samples, double dt) : samples_(std::move(samples)), dt_(dt) {
    if (samples_.empty()) raise(ErrorCode::InvalidArgument, "waveform needs at least one sample");
    if (samples_.size() > 1 && !(dt_ > 0.0)) raise(ErrorCode::InvalidArgument, "waveform dt must be > 0");
}

double Waveform::at(double t) const {
    if (samples_.size() == 1 || t <= 0.0) return samples_.front();
    const double pos = t / dt_;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= samples_.size()) return samples_.back();
    const double w = pos - static_cast<double>(i);
    return samples_[i] + w * (samples_[i + 1] - samples_[i]);
}

std::vector<SquidState> single_squid_dynamics(const SquidParams& squid, const Waveform& drive_current,
                                              const Waveform& flux_ext, const SquidState& initial, double dt,
                                              std::size_t n_steps, const FullModelOptions& options) {
    validate(squid);
    const double beta = beta_L(squid);
    if (!(beta > 0.0)) raise(ErrorCode::InvalidArgument, "full SQUID model needs beta_L > 0");
    const double wp = plasma_frequency(squid.junction);
    if (!(dt > 0.0) || dt * wp > 0.05 * kStepSlack) {
        raise(ErrorCode::InvalidArgument, "time step must satisfy 0 < dt <= 0.05/omega_p");
    }
    // In tau = omega_p t the damping coefficient is omega_p / omega_c.
    const double damping = options.damping ? wp / characteristic_frequency(squid.junction) : 0.0;
    const double two_ic = 2.0 * squid.junction.critical_current;
    const double h = dt * wp;
    const std::size_t every = std::max<std::size_t>(options.sample_every, 1);

    auto rhs = [&](double t, const State4& y) -> State4 {
        const double drive = drive_current.at(t) / two_ic;
        const double flux_phase = 2.0 * kPi * flux_ext.at(t) / constants::flux_quantum;
        const double ap = drive - damping * y[2] - std::cos(y[1]) * std::sin(y[0]);
        const double am = (flux_phase - 2.0 * y[1]) / beta - damping * y[3] - std::cos(y[0]) * std::sin(y[1]);
        return {y[2], y[3], ap, am};
    };

    State4 y{initial.gamma_plus, initial.gamma_minus, initial.dgamma_plus / wp, initial.dgamma_minus / wp};
    double t = initial.t;
    std::vector<SquidState> out;
    out.reserve(n_steps / every + 2);
    auto record = [&] { out.push_back({y[0], y[1], y[2] * wp, y[3] * wp, t}); };
    record();
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const State4 k1 = rhs(t, y);
        const State4 k2 = rhs(t + 0.5 * dt, axpy(y, 0.5 * h, k1));
        const State4 k3 = rhs(t + 0.5 * dt, axpy(y, 0.5 * h, k2));
        const State4 k4 = rhs(t + dt, axpy(y, h, k3));
        for (std::size_t i = 0; i < 4; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = initial.t + static_cast<double>(step) * dt;
        if (!finite(y)) raise(ErrorCode::NonFinite, "SQUID state diverged");
        if (step % every == 0 || step == n_steps) record();
    }
    return out;
}

ReducedTrajectory reduced_junction_dynamics(const SquidParams& squid, const Waveform& drive_current,
                                            const Waveform& flux_ext, double gamma0, double dgamma0, double dt,
                                            std::size_t n_steps, std::size_t sample_every) {
    validate(squid);
    const double w_ref = effective_plasma_frequency(squid, flux_ext.at(0.0));
    if (!(dt > 0.0) || dt * w_ref > 0.05 * kStepSlack) {
        raise(ErrorCode::InvalidArgument, "time step must satisfy 0 < dt <= 0.05/omega_p^s");
    }
    const double h = dt * w_ref;
    const std::size_t every = std::max<std::size_t>(sample_every, 1);

    // gamma'' = r(t)^2 (i(t) - sin gamma), r = omega_p^s(t) / omega_ref, derivatives in tau = omega_ref t.
    auto accel = [&](double t, double g) {
        const double flux = flux_ext.at(t);
        const double r = effective_plasma_frequency(squid, flux) / w_ref;
        return r * r * (drive_current.at(t) / squid_critical_current(squid, flux) - std::sin(g));
    };
    // Energy in units of E_J at the reference flux, plus its O(h^2) shadow correction.
    auto energies_at = [&](double t, double g, double p) {
        const double flux = flux_ext.at(t);
        const double r = effective_plasma_frequency(squid, flux) / w_ref;
        const double i = drive_current.at(t) / squid_critical_current(squid, flux);
        const double raw = 0.5 * p * p / (r * r) + (1.0 - std::cos(g)) - i * g;
        const double grad = r * r * (std::sin(g) - i);
        const double curv = r * r * std::cos(g);
        const double shadow = raw + h * h / 12.0 * curv * p * p / (r * r) - h * h / 24.0 * grad * grad / (r * r);
        return std::pair{raw, shadow};
    };

    ReducedTrajectory out;
    out.samples.reserve(n_steps / every + 2);
    double g = gamma0;
    double p = dgamma0 / w_ref;
    double t = 0.0;
    const auto [raw0, shadow0] = energies_at(t, g, p);
    auto relative = [](double e, double e0) { return std::abs(e - e0) / std::max(std::abs(e0), 1e-300); };
    out.samples.push_back({t, g, p * w_ref});

    double a = accel(t, g);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        p += 0.5 * h * a;
        g += h * p;
        t = static_cast<double>(step) * dt;
        a = accel(t, g);
        p += 0.5 * h * a;
        if (!std::isfinite(g) || !std::isfinite(p)) raise(ErrorCode::NonFinite, "junction phase diverged");
        if (std::abs(g) > 2.0 * kPi) out.running = true;
        const auto [raw, shadow] = energies_at(t, g, p);
        out.raw_energy_deviation = std::max(out.raw_energy_deviation, relative(raw, raw0));
        out.energy_drift = std::max(out.energy_drift, relative(shadow, shadow0));
        if (step % every == 0 || step == n_steps) out.samples.push_back({t, g, p * w_ref});
    }
    return out;
}

double estimate_frequency(std::span<const double> t, std::span<const double> x) {
    if (t.size() != x.size() || t.size() < 3) raise(ErrorCode::FitFailure, "need matching series of length >= 3");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    std::vector<double> crossings;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double a = x[i - 1] - mean;
        const double b = x[i] - mean;
        if (a < 0.0 && b >= 0.0) crossings.push_back(t[i - 1] + (t[i] - t[i - 1]) * (-a) / (b - a));
    }
    if (crossings.size() < 2) raise(ErrorCode::FitFailure, "fewer than two zero crossings");
    // crossing_k = t0 + k T
    const double n = static_cast<double>(crossings.size());
    double sk = 0.0, st = 0.0, skk = 0.0, skt = 0.0;
    for (std::size_t k = 0; k < crossings.size(); ++k) {
        const double kk = static_cast<double>(k);
        sk += kk;
        st += crossings[k];
        skk += kk * kk;
        skt += kk * crossings[k];
    }
    const double period = (n * skt - sk * st) / (n * skk - sk * sk);
    return 2.0 * kPi / period;
}

}  // namespace squid_horizon::circuit
