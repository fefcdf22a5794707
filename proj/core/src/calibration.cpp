#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>

#include "squid_horizon/bias.hpp"
#include "squid_horizon/errors.hpp"
#include "squid_horizon/geometry.hpp"

namespace squid_horizon::bias {

namespace {
constexpr double kMaxBroadening = 1e6;  // 1/m
}

double calibrate_broadening(double target_decay, std::size_t n_cells, const circuit::ArrayParams& array,
                            const circuit::SquidParams& squid, const FluxPulse& pulse) {
    if (!(target_decay >= 0.0 && target_decay < 1.0)) {
        raise(ErrorCode::InvalidArgument, "target decay must lie in [0, 1)");
    }
    if (target_decay == 0.0) return 0.0;
    const double travel_time = static_cast<double>(n_cells) * array.cell_length / pulse.velocity;

    FluxPulse fresh = pulse;
    fresh.broadening_rate = 0.0;
    const double t0 = geometry::hawking_temperature(geometry::velocity_profile(array, squid, fresh, 0.0));

    auto residual = [&](double b) {
        FluxPulse p = pulse;
        p.broadening_rate = b;
        const double th = geometry::hawking_temperature(geometry::velocity_profile(array, squid, p, travel_time));
        return th / t0 - (1.0 - target_decay);
    };
    const double f_lo = residual(0.0);
    const double f_hi = residual(kMaxBroadening);
    if (f_lo * f_hi > 0.0) raise(ErrorCode::NoRoot, "decay target unreachable for b in [0, 1e6] /m");

    std::uintmax_t max_iter = 200;
    const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-6 * std::max(std::abs(a), std::abs(b)); };
    const auto [lo, hi] = boost::math::tools::toms748_solve(residual, 0.0, kMaxBroadening, f_lo, f_hi, tol, max_iter);
    return 0.5 * (lo + hi);
}

}  // namespace squid_horizon::bias
