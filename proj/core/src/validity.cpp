#include "squid_horizon/validity.hpp"

#include <cmath>
#include <limits>

#include "squid_horizon/constants.hpp"
#include "squid_horizon/errors.hpp"

namespace squid_horizon::circuit {

namespace {

ValidityCheck make_check(std::string name, double value, double threshold, Comparison cmp) {
    ValidityCheck c{std::move(name), value, threshold, cmp, false, 0.0};
    switch (cmp) {
    case Comparison::AtMost: c.pass = value <= threshold; break;
    case Comparison::Below: c.pass = value < threshold; break;
    case Comparison::Above: c.pass = value > threshold; break;
    }
    if (!std::isfinite(value)) c.pass = false;
    const double scale = threshold != 0.0 ? std::abs(threshold) : 1.0;
    c.margin = (cmp == Comparison::Above ? value - threshold : threshold - value) / scale;
    if (!std::isfinite(c.margin)) c.margin = -std::numeric_limits<double>::infinity();
    return c;
}

// Out-of-domain flux makes the quantity undefined; the check then fails.
template <class F>
double guarded(F&& f) {
    try {
        return f();
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

bool ValidityReport::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

const ValidityCheck* ValidityReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

ValidityReport validity_report(const ArrayParams& array, const SquidParams& squid, const bias::FluxPulse& pulse,
                               double max_signal_frequency, const ValidityLimits& limits) {
    const double peak = flux_from_fraction(bias::peak_flux_fraction(pulse));
    const double dc = flux_from_fraction(pulse.dc_offset);

    ValidityReport report;
    report.checks.push_back(make_check("beta_L", beta_L(squid), limits.beta_L_max, Comparison::AtMost));
    report.checks.push_back(make_check(
        "signal_frequency", guarded([&] { return max_signal_frequency / effective_plasma_frequency(squid, peak); }),
        limits.frequency_fraction, Comparison::AtMost));
    report.checks.push_back(make_check("peak_flux", bias::peak_flux_fraction(pulse), limits.flux_max,
                                       Comparison::AtMost));
    report.checks.push_back(make_check(
        "impedance",
        guarded([&] {
            return (array.environment_impedance + array_impedance(array, squid, peak)) / constants::resistance_quantum;
        }),
        1.0, Comparison::Below));
    report.checks.push_back(make_check(
        "energy_ratio", guarded([&] { return energies(squid, peak).ratio(); }), 1.0, Comparison::Above));
    report.checks.push_back(make_check(
        "pulse_velocity", guarded([&] { return pulse.velocity / cell_velocity(array, squid, dc); }), 1.0,
        Comparison::Below));
    return report;
}

}  // namespace squid_horizon::circuit
