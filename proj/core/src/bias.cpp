#include "squid_horizon/bias.hpp"

#include <algorithm>
#include <cmath>

#include "squid_horizon/constants.hpp"
#include "squid_horizon/errors.hpp"

namespace squid_horizon::bias {

void validate(const FluxPulse& pulse) {
    const double peak = pulse.dc_offset + pulse.amplitude;
    if (!std::isfinite(peak) || pulse.dc_offset < 0.0 || pulse.amplitude < 0.0 || peak >= 0.5) {
        raise(ErrorCode::FluxOutOfRange, "pulse needs dc >= 0, amplitude >= 0 and dc + amplitude < 0.5 Phi0");
    }
    if (!(pulse.velocity > 0.0) || !std::isfinite(pulse.velocity)) {
        raise(ErrorCode::InvalidArgument, "pulse velocity must be > 0");
    }
    if (!(pulse.steepness > 0.0) || !std::isfinite(pulse.steepness)) {
        raise(ErrorCode::InvalidArgument, "pulse steepness must be > 0");
    }
    if (!(pulse.broadening_rate >= 0.0) || !std::isfinite(pulse.broadening_rate)) {
        raise(ErrorCode::InvalidArgument, "broadening rate must be >= 0");
    }
    if (!std::isfinite(pulse.front_position)) raise(ErrorCode::InvalidArgument, "front position must be finite");
}

double steepness_at(const FluxPulse& pulse, double t) {
    return pulse.steepness / (1.0 + pulse.broadening_rate * pulse.velocity * t);
}

double flux_at(const FluxPulse& pulse, double x, double t) {
    const double z = steepness_at(pulse, t) * (x - pulse.front_position - pulse.velocity * t);
    double shape = 0.0;
    switch (pulse.shape) {
    case PulseShape::TanhStep: shape = 0.5 * (1.0 - std::tanh(z)); break;
    case PulseShape::Gaussian: shape = std::exp(-z * z); break;
    }
    return constants::flux_quantum * (pulse.dc_offset + pulse.amplitude * shape);
}

double comoving_flux(const FluxPulse& pulse, double xi, double t) {
    return flux_at(pulse, xi + pulse.velocity * t, t);
}

double peak_flux_fraction(const FluxPulse& pulse) { return pulse.dc_offset + pulse.amplitude; }

FluxField FluxField::uniform(double fraction) {
    circuit::check_flux_domain(circuit::flux_from_fraction(fraction));
    return FluxField(Uniform{fraction});
}

FluxField FluxField::step(double position, double fraction_left, double fraction_right) {
    circuit::check_flux_domain(circuit::flux_from_fraction(fraction_left));
    circuit::check_flux_domain(circuit::flux_from_fraction(fraction_right));
    return FluxField(Step{position, fraction_left, fraction_right});
}

FluxField FluxField::moving(const FluxPulse& pulse) {
    validate(pulse);
    return FluxField(pulse);
}

double FluxField::flux(double x, double t) const {
    struct Visitor {
        double x;
        double t;
        double operator()(const Uniform& u) const { return circuit::flux_from_fraction(u.fraction); }
        double operator()(const Step& s) const {
            return circuit::flux_from_fraction(x < s.position ? s.left : s.right);
        }
        double operator()(const FluxPulse& p) const { return flux_at(p, x, t); }
    };
    return std::visit(Visitor{x, t}, source_);
}

bool FluxField::is_static() const { return !std::holds_alternative<FluxPulse>(source_); }

double FluxField::min_fraction() const {
    if (const auto* u = std::get_if<Uniform>(&source_)) return u->fraction;
    if (const auto* s = std::get_if<Step>(&source_)) return std::min(s->left, s->right);
    return std::get<FluxPulse>(source_).dc_offset;
}

double FluxField::max_fraction() const {
    if (const auto* u = std::get_if<Uniform>(&source_)) return u->fraction;
    if (const auto* s = std::get_if<Step>(&source_)) return std::max(s->left, s->right);
    return peak_flux_fraction(std::get<FluxPulse>(source_));
}

}  // namespace squid_horizon::bias
