#include "squid_horizon/circuit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "squid_horizon/constants.hpp"
#include "squid_horizon/errors.hpp"

namespace squid_horizon::circuit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSmallRatio = 1e-6;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const JunctionParams& junction) {
    if (!positive_finite(junction.critical_current)) {
        raise(ErrorCode::InvalidArgument, "junction critical current must be > 0");
    }
    if (!positive_finite(junction.capacitance)) {
        raise(ErrorCode::InvalidArgument, "junction capacitance must be > 0");
    }
    if (junction.normal_resistance && !positive_finite(*junction.normal_resistance)) {
        raise(ErrorCode::InvalidArgument, "junction normal resistance must be > 0 when given");
    }
}

void validate(const SquidParams& squid) {
    validate(squid.junction);
    if (!std::isfinite(squid.loop_inductance) || squid.loop_inductance < 0.0) {
        raise(ErrorCode::InvalidArgument, "SQUID loop inductance must be >= 0");
    }
}

void validate(const ArrayParams& array) {
    if (array.n_cells < 2) raise(ErrorCode::InvalidArgument, "array needs at least 2 cells");
    if (!positive_finite(array.cell_length)) raise(ErrorCode::InvalidArgument, "cell length must be > 0");
    if (!positive_finite(array.ground_capacitance)) {
        raise(ErrorCode::InvalidArgument, "ground capacitance must be > 0");
    }
    if (!std::isfinite(array.environment_impedance) || array.environment_impedance < 0.0) {
        raise(ErrorCode::InvalidArgument, "environment impedance must be >= 0");
    }
}

double capacitance_for_plasma_frequency(double critical_current, double plasma_frequency) {
    if (!positive_finite(critical_current) || !positive_finite(plasma_frequency)) {
        raise(ErrorCode::InvalidArgument, "critical current and plasma frequency must be > 0");
    }
    return 2.0 * kPi * critical_current / (plasma_frequency * plasma_frequency * constants::flux_quantum);
}

double plasma_frequency(const JunctionParams& junction) {
    return std::sqrt(2.0 * kPi * junction.critical_current / (junction.capacitance * constants::flux_quantum));
}

double characteristic_frequency(const JunctionParams& junction) {
    if (!junction.normal_resistance) {
        raise(ErrorCode::InvalidArgument, "characteristic frequency needs a normal resistance");
    }
    return 2.0 * kPi * junction.critical_current * *junction.normal_resistance / constants::flux_quantum;
}

double flux_from_fraction(double fraction) { return fraction * constants::flux_quantum; }

double fraction_from_flux(double flux) { return flux / constants::flux_quantum; }

void check_flux_domain(double flux) {
    const double f = fraction_from_flux(flux);
    if (!std::isfinite(f) || std::abs(f) >= 0.5) {
        std::ostringstream os;
        os << "|flux| must be below Phi0/2, got " << f << " Phi0";
        raise(ErrorCode::FluxOutOfRange, os.str());
    }
}

double squid_critical_current(const SquidParams& squid, double flux) {
    check_flux_domain(flux);
    return 2.0 * squid.junction.critical_current * std::cos(kPi * fraction_from_flux(flux));
}

double effective_plasma_frequency(const SquidParams& squid, double flux) {
    const double ics = squid_critical_current(squid, flux);
    return std::sqrt(2.0 * kPi * ics / (2.0 * squid.junction.capacitance * constants::flux_quantum));
}

double josephson_inductance(const SquidParams& squid, double current, double flux) {
    const double ics = squid_critical_current(squid, flux);
    const double x = current / ics;
    if (!std::isfinite(x) || std::abs(x) > 1.0) {
        std::ostringstream os;
        os << "|I|/I_c^s = " << std::abs(x) << " exceeds 1";
        raise(ErrorCode::OverCritical, os.str());
    }
    // arcsin(x)/x = 1 + x^2/6 + O(x^4)
    const double shape = std::abs(x) < kSmallRatio ? 1.0 + x * x / 6.0 : std::asin(x) / x;
    return constants::flux_quantum / (2.0 * kPi * ics) * shape;
}

double cell_velocity(const ArrayParams& array, const SquidParams& squid, double flux, double current) {
    const double l = josephson_inductance(squid, current, flux);
    return array.cell_length / std::sqrt(l * array.ground_capacitance);
}

Energies energies(const SquidParams& squid, double flux) {
    const double ics = squid_critical_current(squid, flux);
    const double e = constants::electron_charge;
    return {constants::flux_quantum * ics / (2.0 * kPi), e * e / (4.0 * squid.junction.capacitance)};
}

double beta_L(const SquidParams& squid) {
    return 2.0 * kPi * squid.loop_inductance * squid.junction.critical_current / constants::flux_quantum;
}

double array_impedance(const ArrayParams& array, const SquidParams& squid, double flux) {
    check_flux_domain(flux);
    const double e = constants::electron_charge;
    const double sec = 1.0 / std::cos(kPi * fraction_from_flux(flux));
    return constants::resistance_quantum *
           std::sqrt(2.0 * kPi * e * e * sec /
                     (constants::flux_quantum * array.ground_capacitance * squid.junction.critical_current));
}

}  // namespace squid_horizon::circuit
