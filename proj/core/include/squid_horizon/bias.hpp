#pragma once

// External flux bias: a moving step (or bump) in Phi_ext travelling at u.

#include <cstddef>
#include <variant>

#include "squid_horizon/circuit.hpp"

namespace squid_horizon::bias {

enum class PulseShape {
    TanhStep,  // flux high behind the front, low ahead
    Gaussian,  // bump; produces a black/white horizon pair
};

struct FluxPulse {
    double amplitude = 0.0;        // Phi0
    double dc_offset = 0.0;        // Phi0
    double velocity = 0.0;         // m/s
    double steepness = 0.0;        // 1/m at t = 0
    double front_position = 0.0;   // m at t = 0
    double broadening_rate = 0.0;  // fractional width growth per metre travelled
    PulseShape shape = PulseShape::TanhStep;
};

/// Enforces 0 <= dc + amplitude < 0.5, u > 0, s0 > 0, b >= 0.
void validate(const FluxPulse& pulse);

/// s(t) = s0 / (1 + b u t).
[[nodiscard]] double steepness_at(const FluxPulse& pulse, double t);

/// Phi0 [dc + (amp/2)(1 - tanh(s(t)(x - x0 - u t)))] for the step shape.
[[nodiscard]] double flux_at(const FluxPulse& pulse, double x, double t);

/// flux_at evaluated at x = xi + u t.
[[nodiscard]] double comoving_flux(const FluxPulse& pulse, double xi, double t);

/// Largest flux anywhere on the line, in Phi0.
[[nodiscard]] double peak_flux_fraction(const FluxPulse& pulse);

/// Broadening rate b for which the Hawking temperature of the comoving profile
/// falls by target_decay after the pulse has travelled n_cells cells.
///
/// Solved by bracketed root finding on b in [0, 1e6] /m to 1e-3 relative.
/// Throws NoRoot if the target is unreachable in that range.
[[nodiscard]] double calibrate_broadening(double target_decay, std::size_t n_cells,
                                          const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                          const FluxPulse& pulse);

/// Flux seen by the lattice: a uniform bias, a static sharp step, or a moving pulse.
class FluxField {
public:
    static FluxField uniform(double fraction);
    /// fraction_left for x < position, fraction_right for x >= position.
    static FluxField step(double position, double fraction_left, double fraction_right);
    static FluxField moving(const FluxPulse& pulse);

    [[nodiscard]] double flux(double x, double t) const;  // Wb
    [[nodiscard]] bool is_static() const;
    [[nodiscard]] double min_fraction() const;
    [[nodiscard]] double max_fraction() const;

private:
    struct Uniform {
        double fraction;
    };
    struct Step {
        double position;
        double left;
        double right;
    };
    using Source = std::variant<Uniform, Step, FluxPulse>;

    explicit FluxField(Source source) : source_(source) {}

    Source source_;
};

}  // namespace squid_horizon::bias
