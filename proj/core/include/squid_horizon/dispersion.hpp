#pragma once

// Lattice dispersion omega(k) = (2 / sqrt(L C0)) |sin(k a / 2)|, its measured
// counterpart from driven lattice runs, and the short-distance cutoff.

#include <cstddef>
#include <span>
#include <vector>

#include "squid_horizon/bias.hpp"
#include "squid_horizon/circuit.hpp"

namespace squid_horizon::dispersion {

/// Throws OutOfBand for |k| > pi / a.
[[nodiscard]] double omega_analytic(double k, double inductance, double capacitance, double cell_length);
/// c cos(k a / 2) for k >= 0.
[[nodiscard]] double group_velocity(double k, double inductance, double capacitance, double cell_length);
/// Inverse of omega_analytic on [0, pi/a]. Throws OutOfBand above the band edge.
[[nodiscard]] double wavenumber_for(double omega, double inductance, double capacitance, double cell_length);
/// 1 - sin(ka/2)/(ka/2): fractional shortfall of omega against the continuum ck.
[[nodiscard]] double continuum_error(double ka);

struct CutoffScale {
    double length = 0.0;       // c / omega_p^s, m
    double cell_length = 0.0;  // a, m
    [[nodiscard]] double ratio() const { return length / cell_length; }
    [[nodiscard]] bool exceeds_cell() const { return length > cell_length; }
};

[[nodiscard]] CutoffScale cutoff_scale(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                       double flux);

struct DispersionPoint {
    double k = 0.0;               // measured, 1/m
    double omega_analytic = 0.0;  // at the measured k
    double omega_measured = 0.0;  // drive frequency
    double rel_error = 0.0;
    double fit_residual = 0.0;    // rms phase residual, rad
};

struct DispersionCurve {
    std::vector<DispersionPoint> points;  // sorted by k
    double inductance = 0.0;
    double capacitance = 0.0;
    double cell_length = 0.0;
};

struct MeasureOptions {
    double courant_fraction = 0.2;
    double min_wavelengths = 12.0;      // fit window
    double max_phase_residual = 0.05;   // rad rms; FitFailure beyond
    std::size_t workers = 1;
};

/// Drives a uniform line at each frequency, demodulates the steady state at
/// the drive frequency and fits k to the unwrapped spatial phase.
///
/// Throws BandLimit for any frequency above 0.95 of the band edge.
[[nodiscard]] DispersionCurve measure_dispersion(const circuit::ArrayParams& array, const circuit::SquidParams& squid,
                                                 double flux_dc, std::span<const double> frequencies,
                                                 const MeasureOptions& options = {});

/// Fraction of the spectral energy of the bias-front gradient above
/// k a = ka_limit. The toolkit flags fronts where this exceeds 1e-3.
[[nodiscard]] double front_spectral_fraction(const bias::FluxPulse& pulse, double cell_length,
                                             double ka_limit = 0.5);

inline constexpr double kFrontSpectralFlag = 1e-3;

}  // namespace squid_horizon::dispersion
