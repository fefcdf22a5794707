#include "squid_horizon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "squid_horizon/constants.hpp"
#include "squid_horizon/errors.hpp"

namespace squid_horizon::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kBisectionIterations = 200;

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double xi) {
    const auto it = std::upper_bound(x.begin(), x.end(), xi);
    if (it == x.begin()) return y.front();
    if (it == x.end()) return y.back();
    const auto j = static_cast<std::size_t>(it - x.begin());
    const double w = (xi - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + w * (y[j] - y[j - 1]);
}

// Centered differences on h, h/2, h/4, ... extrapolated with a Richardson table.
double derivative(const std::function<double(double)>& f, double x, double h) {
    constexpr int kLevels = 8;
    double table[kLevels][kLevels];
    double best = 0.0;
    double best_error = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kLevels; ++i) {
        table[i][0] = (f(x + h) - f(x - h)) / (2.0 * h);
        double factor = 4.0;
        for (int j = 1; j <= i; ++j) {
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
            factor *= 4.0;
            const double error = std::max(std::abs(table[i][j] - table[i][j - 1]),
                                          std::abs(table[i][j] - table[i - 1][j - 1]));
            if (error < best_error) {
                best_error = error;
                best = table[i][j];
            }
        }
        if (i > 0 && std::abs(table[i][i] - table[i - 1][i - 1]) > 2.0 * best_error) break;
        h *= 0.5;
    }
    return best;
}

double refine_root(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < kBisectionIterations && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double VelocityProfile::velocity_at(double xi) const {
    if (evaluate) return evaluate(xi);
    return interpolate(x, c, xi);
}

ProfileGrid default_grid(const circuit::ArrayParams& array, const bias::FluxPulse& pulse, double t) {
    const double width = 1.0 / bias::steepness_at(pulse, t);
    const double half_span = 30.0 * width + 20.0 * array.cell_length;
    return {pulse.front_position - half_span, pulse.front_position + half_span, array.cell_length};
}

VelocityProfile velocity_profile(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                 const bias::FluxPulse& pulse, double t) {
    return velocity_profile(array, squid, pulse, t, default_grid(array, pulse, t));
}

VelocityProfile velocity_profile(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                 const bias::FluxPulse& pulse, double t, const ProfileGrid& grid) {
    bias::validate(pulse);
    circuit::check_flux_domain(circuit::flux_from_fraction(bias::peak_flux_fraction(pulse)));
    if (!(grid.spacing > 0.0) || !(grid.xi_max > grid.xi_min)) {
        raise(ErrorCode::InvalidArgument, "profile grid needs spacing > 0 and xi_max > xi_min");
    }
    VelocityProfile profile;
    profile.u = pulse.velocity;
    profile.t = t;
    profile.evaluate = [array, squid, pulse, t](double xi) {
        return circuit::cell_velocity(array, squid, bias::comoving_flux(pulse, xi, t));
    };
    const auto n = static_cast<std::size_t>(std::floor((grid.xi_max - grid.xi_min) / grid.spacing)) + 1;
    profile.x.reserve(n);
    profile.c.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = grid.xi_min + static_cast<double>(i) * grid.spacing;
        profile.x.push_back(xi);
        profile.c.push_back(profile.evaluate(xi));
    }
    return profile;
}

EffectiveMetric effective_metric(double c, double u) {
    const double inv = 1.0 / (c * c);
    return {inv, -u * inv, (u * u - c * c) * inv};
}

EffectiveMetric effective_metric(const VelocityProfile& profile, double xi) {
    if (profile.x.empty() || xi < profile.x.front() || xi > profile.x.back()) {
        raise(ErrorCode::OutOfRange, "metric requested outside the profile grid");
    }
    return effective_metric(profile.velocity_at(xi), profile.u);
}

const char* to_string(HorizonKind kind) noexcept { return kind == HorizonKind::Black ? "black" : "white"; }

std::vector<HorizonReport> find_horizons(const VelocityProfile& profile) {
    std::vector<HorizonReport> out;
    const auto& x = profile.x;
    const auto& c = profile.c;
    if (x.size() < 2) return out;
    const double u = profile.u;
    const auto excess = [&](double xi) { return profile.velocity_at(xi) - u; };
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double d0 = c[i - 1] - u;
        const double d1 = c[i] - u;
        // Count a zero sample once, as the upper end of a bracket.
        if (!((d0 < 0.0 && d1 >= 0.0) || (d0 > 0.0 && d1 <= 0.0))) continue;
        if (d1 == 0.0 && i + 1 < x.size() && (c[i + 1] - u) * d0 > 0.0) continue;  // touch, not a crossing
        const double spacing = x[i] - x[i - 1];
        double xh = x[i - 1] + spacing * d0 / (d0 - d1);
        double gradient = (c[i] - c[i - 1]) / spacing;
        if (profile.evaluate) {
            xh = refine_root(excess, x[i - 1], x[i]);
            gradient = derivative(profile.evaluate, xh, 0.25 * spacing);
        }
        HorizonReport report;
        report.position = xh;
        report.kind = d1 > d0 ? HorizonKind::Black : HorizonKind::White;
        report.velocity_gradient = std::abs(gradient);
        report.temperature = hawking_temperature(report.velocity_gradient);
        report.power = radiated_power(report.temperature);
        out.push_back(report);
    }
    return out;
}

double hawking_temperature(double velocity_gradient) {
    return constants::reduced_planck / (2.0 * kPi * constants::boltzmann) * std::abs(velocity_gradient);
}

double hawking_temperature(const VelocityProfile& profile) {
    for (const auto& h : find_horizons(profile)) {
        if (h.kind == HorizonKind::Black) return h.temperature;
    }
    raise(ErrorCode::NoHorizon, "profile has no black horizon");
}

double radiated_power(double temperature) {
    const double kt = constants::boltzmann * temperature;
    return kPi / (12.0 * constants::reduced_planck) * kt * kt;
}

double photon_rate(double temperature) {
    if (temperature <= 0.0) return 0.0;
    return radiated_power(temperature) / (constants::boltzmann * temperature);
}

double steepness_for_gradient(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                              const bias::FluxPulse& pulse, double target_gradient) {
    // |dc/dx| at the horizon scales linearly with s at fixed amplitude and u.
    bias::FluxPulse probe = pulse;
    probe.steepness = 1.0 / array.cell_length;
    probe.broadening_rate = 0.0;
    const auto profile = velocity_profile(array, squid, probe, 0.0);
    for (const auto& h : find_horizons(profile)) {
        if (h.kind == HorizonKind::Black) return probe.steepness * target_gradient / h.velocity_gradient;
    }
    raise(ErrorCode::NoHorizon, "pulse has no black horizon to calibrate against");
}

PhotonBudget photons_per_pulse(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                               const bias::FluxPulse& pulse, std::size_t line_length_cells, std::size_t n_samples) {
    n_samples = std::max<std::size_t>(n_samples, 3) | 1U;  // Simpson needs an odd count
    PhotonBudget budget;
    budget.traversal_time = static_cast<double>(line_length_cells) * array.cell_length / pulse.velocity;
    const double h = budget.traversal_time / static_cast<double>(n_samples - 1);

    auto black_horizon = [&](double t) -> std::optional<HorizonReport> {
        for (const auto& r : find_horizons(velocity_profile(array, squid, pulse, t))) {
            if (r.kind == HorizonKind::Black) return r;
        }
        return std::nullopt;
    };
    if (!black_horizon(0.0)) raise(ErrorCode::NoHorizon, "pulse has no black horizon at t = 0");

    double sum = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) * h;
        TemperatureSample sample;
        sample.t = t;
        if (const auto r = black_horizon(t)) {
            sample.position = r->position;
            sample.velocity_gradient = r->velocity_gradient;
            sample.temperature = r->temperature;
            sample.power = r->power;
        }
        const double weight = (i == 0 || i + 1 == n_samples) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += weight * photon_rate(sample.temperature);
        budget.trace.push_back(sample);
    }
    budget.count = line_length_cells == 0 ? 0.0 : sum * h / 3.0;
    return budget;
}

}  // namespace squid_horizon::geometry
