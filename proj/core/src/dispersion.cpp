#include "squid_horizon/dispersion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "squid_horizon/errors.hpp"
#include "squid_horizon/lattice.hpp"

namespace squid_horizon::dispersion {

namespace {

constexpr double kPi = std::numbers::pi;

void check_band(double k, double cell_length) {
    if (!std::isfinite(k) || std::abs(k) * cell_length > kPi * (1.0 + 1e-12)) {
        raise(ErrorCode::OutOfBand, "|k| exceeds pi / a");
    }
}

DispersionPoint measure_point(const circuit::ArrayParams& base, const circuit::SquidParams& squid, double flux_dc,
                              double omega, const MeasureOptions& options) {
    const double inductance = circuit::josephson_inductance(squid, 0.0, flux_dc);
    const double c0 = base.ground_capacitance;
    const double tau = std::sqrt(inductance * c0);
    const double k_guess = wavenumber_for(omega, inductance, c0, 1.0);  // rad per cell
    const double wavelength = 2.0 * kPi / k_guess;                     // cells
    const double vg = std::max(std::cos(0.5 * k_guess), 0.05);          // cells per tau

    const auto window = static_cast<std::size_t>(std::ceil(std::max(options.min_wavelengths * wavelength, 48.0)));
    const auto margin = static_cast<std::size_t>(std::ceil(std::max(wavelength, 16.0)));
    circuit::ArrayParams array = base;
    array.n_cells = margin + window + margin;

    lattice::SolverConfig cfg;
    cfg.courant_fraction = options.courant_fraction;
    cfg.boundary = lattice::Boundary::DrivenLeftAbsorbingRight;
    cfg.record_fields = false;
    lattice::Lattice line(array, squid, bias::FluxField::uniform(circuit::fraction_from_flux(flux_dc)), cfg);
    const auto drive = lattice::inject_sine(line, 1.0, omega);
    line.set_drive(drive);

    const double dt = line.dt();
    const double period = 2.0 * kPi / omega;
    // Ramp, then two transits of the line at the group velocity to settle.
    const double settle = drive.ramp_time + 2.0 * static_cast<double>(array.n_cells) * tau / vg + 4.0 * period;
    const auto settle_steps = static_cast<std::size_t>(std::ceil(settle / dt));
    const double n_periods = std::max(8.0, std::ceil(200.0 * dt / period));
    const auto demod_steps = static_cast<std::size_t>(std::llround(n_periods * period / dt));

    auto state = line.zero_state();
    for (std::size_t i = 0; i < settle_steps; ++i) line.step(state);

    std::vector<std::complex<double>> z(window, {0.0, 0.0});
    for (std::size_t i = 0; i < demod_steps; ++i) {
        line.step(state);
        const std::complex<double> ref = std::polar(1.0, -omega * state.t);
        for (std::size_t j = 0; j < window; ++j) z[j] += state.A[margin + j] * ref;
    }

    std::vector<double> phase(window);
    phase[0] = std::arg(z[0]);
    for (std::size_t j = 1; j < window; ++j) {
        double d = std::arg(z[j]) - std::arg(z[j - 1]);
        d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
        phase[j] = phase[j - 1] + d;
    }
    const double n = static_cast<double>(window);
    const double mj = 0.5 * (n - 1.0);
    double mp = 0.0;
    for (double p : phase) mp += p;
    mp /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t j = 0; j < window; ++j) {
        const double dj = static_cast<double>(j) - mj;
        sxy += dj * (phase[j] - mp);
        sxx += dj * dj;
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t j = 0; j < window; ++j) {
        const double r = phase[j] - (mp + slope * (static_cast<double>(j) - mj));
        rss += r * r;
    }

    DispersionPoint p;
    p.fit_residual = std::sqrt(rss / n);
    if (p.fit_residual > options.max_phase_residual) {
        std::ostringstream os;
        os << "phase fit residual " << p.fit_residual << " rad at omega = " << omega;
        raise(ErrorCode::FitFailure, os.str());
    }
    p.k = -slope / base.cell_length;
    p.omega_measured = omega;
    p.omega_analytic = omega_analytic(p.k, inductance, c0, base.cell_length);
    p.rel_error = std::abs(p.omega_measured - p.omega_analytic) / p.omega_analytic;
    return p;
}

}  // namespace

double omega_analytic(double k, double inductance, double capacitance, double cell_length) {
    check_band(k, cell_length);
    return 2.0 / std::sqrt(inductance * capacitance) * std::abs(std::sin(0.5 * k * cell_length));
}

double group_velocity(double k, double inductance, double capacitance, double cell_length) {
    check_band(k, cell_length);
    return cell_length / std::sqrt(inductance * capacitance) * std::cos(0.5 * k * cell_length);
}

double wavenumber_for(double omega, double inductance, double capacitance, double cell_length) {
    const double s = 0.5 * omega * std::sqrt(inductance * capacitance);
    if (!(s >= 0.0 && s <= 1.0)) raise(ErrorCode::OutOfBand, "frequency above the band edge");
    return 2.0 * std::asin(s) / cell_length;
}

double continuum_error(double ka) {
    const double h = 0.5 * std::abs(ka);
    if (h < 1e-8) return h * h / 6.0;
    return 1.0 - std::sin(h) / h;
}

CutoffScale cutoff_scale(const circuit::ArrayParams& array, const circuit::SquidParams& squid, double flux) {
    return {circuit::cell_velocity(array, squid, flux) / circuit::effective_plasma_frequency(squid, flux),
            array.cell_length};
}

DispersionCurve measure_dispersion(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                   double flux_dc, std::span<const double> frequencies,
                                   const MeasureOptions& options) {
    circuit::validate(array);
    circuit::validate(squid);
    DispersionCurve curve;
    curve.inductance = circuit::josephson_inductance(squid, 0.0, flux_dc);
    curve.capacitance = array.ground_capacitance;
    curve.cell_length = array.cell_length;
    const double band_edge = 2.0 / std::sqrt(curve.inductance * curve.capacitance);
    for (double w : frequencies) {
        if (!(w > 0.0) || w > 0.95 * band_edge) {
            std::ostringstream os;
            os << "frequency " << w << " rad/s above 0.95 of the band edge " << band_edge;
            raise(ErrorCode::BandLimit, os.str());
        }
    }

    std::vector<DispersionPoint> points(frequencies.size());
    std::vector<std::exception_ptr> errors(frequencies.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < frequencies.size(); i = next++) {
            try {
                points[i] = measure_point(array, squid, flux_dc, frequencies[i], options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n_workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(frequencies.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    curve.points = std::move(points);
    return curve;
}

double front_spectral_fraction(const bias::FluxPulse& pulse, double cell_length, double ka_limit) {
    // |F(k)|^2 of the front gradient, normalised to F(0) = 1.
    auto power = [&](double k) {
        const double s = pulse.steepness;
        if (pulse.shape == bias::PulseShape::Gaussian) {
            // d/dx exp(-(s x)^2) has spectrum ~ k exp(-k^2 / 4 s^2)
            const double g = k / s * std::exp(-k * k / (4.0 * s * s));
            return g * g;
        }
        const double z = 0.5 * kPi * k / s;  // sech^2 has spectrum z / sinh z
        const double f = z < 1e-8 ? 1.0 : z / std::sinh(z);
        return f * f;
    };
    // Trapezoid on a grid fine against the spectral width s.
    const double k_limit = ka_limit / cell_length;
    const double k_max = std::max(k_limit, 0.0) + 40.0 * pulse.steepness;
    const std::size_t n = 20000;
    const double h = k_max / static_cast<double>(n);
    double total = 0.0, above = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double k = static_cast<double>(i) * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const double p = w * power(k) * h;
        total += p;
        if (k >= k_limit) above += p;
    }
    return total > 0.0 ? above / total : 0.0;
}

}  // namespace squid_horizon::dispersion
