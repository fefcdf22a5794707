#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "reference_values.hpp"
#include "squid_horizon/constants.hpp"
#include "squid_horizon/errors.hpp"
#include "squid_horizon/validity.hpp"

using namespace squid_horizon;
using namespace squid_horizon::circuit;
using doctest::Approx;

namespace {

void require_code(ErrorCode code, auto&& fn) {
    try {
        fn();
        FAIL("expected " << to_string(code));
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

bias::FluxPulse reference_pulse() {
    bias::FluxPulse p;
    p.amplitude = 0.2;
    p.velocity = 0.95 * reference::kVelocityZeroFlux;
    p.steepness = 4e5;
    return p;
}

}  // namespace

TEST_CASE("constants agree with the reference values") {
    CHECK(constants::flux_quantum == Approx(reference::kFluxQuantum).epsilon(1e-14));
    CHECK(constants::resistance_quantum == Approx(reference::kResistanceQuantum).epsilon(1e-14));
    CHECK(constants::resistance_quantum == Approx(6.45e3).epsilon(1e-3));
}

TEST_CASE("junction capacitance from the plasma frequency") {
    const auto s = fixtures::reference_squid();
    CHECK(s.junction.capacitance == Approx(reference::kJunctionCapacitance).epsilon(1e-12));
    CHECK(plasma_frequency(s.junction) == Approx(2.0 * std::numbers::pi * 1e12).epsilon(1e-12));
    CHECK(effective_plasma_frequency(s, 0.0) == Approx(plasma_frequency(s.junction)).epsilon(1e-12));
    CHECK(effective_plasma_frequency(s, flux_from_fraction(0.2)) ==
          Approx(reference::kPlasmaFrequency02).epsilon(1e-12));
}

TEST_CASE("squid critical current and inductance") {
    const auto s = fixtures::reference_squid();
    CHECK(squid_critical_current(s, 0.0) == Approx(4e-6).epsilon(1e-15));
    CHECK(squid_critical_current(s, flux_from_fraction(0.2)) == Approx(reference::kSquidCurrent02).epsilon(1e-13));
    CHECK(josephson_inductance(s, 0.0, 0.0) == Approx(reference::kInductanceZeroFlux).epsilon(1e-13));
    CHECK(josephson_inductance(s, 2e-6, 0.0) == Approx(reference::kInductanceHalfCurrent).epsilon(1e-13));
    // series branch joins the exact expression smoothly
    const double l0 = josephson_inductance(s, 0.0, 0.0);
    CHECK(josephson_inductance(s, 4e-6 * 0.999e-6, 0.0) == Approx(l0).epsilon(1e-12));
    CHECK(josephson_inductance(s, 4e-6 * 1.001e-6, 0.0) == Approx(l0).epsilon(1e-12));
}

TEST_CASE("inductance errors") {
    const auto s = fixtures::reference_squid();
    require_code(ErrorCode::OverCritical, [&] { (void)josephson_inductance(s, 4.1e-6, 0.0); });
    require_code(ErrorCode::FluxOutOfRange, [&] { (void)josephson_inductance(s, 0.0, flux_from_fraction(0.5)); });
    require_code(ErrorCode::FluxOutOfRange, [&] { (void)squid_critical_current(s, flux_from_fraction(-0.6)); });
}

TEST_CASE("velocity of the reference line") {
    const auto s = fixtures::reference_squid();
    const auto a = fixtures::reference_array();
    const double c = cell_velocity(a, s, 0.0);
    CHECK(c == Approx(reference::kVelocityZeroFlux).epsilon(1e-12));
    CHECK(constants::vacuum_light_speed / c == Approx(reference::kLightSpeedRatio).epsilon(1e-12));
    CHECK(cell_velocity(a, s, flux_from_fraction(0.2)) / c == Approx(reference::kSqrtCos02).epsilon(1e-12));
}

TEST_CASE("energies, beta_L and impedance") {
    const auto s = fixtures::reference_squid();
    const auto e = energies(s, 0.0);
    CHECK(e.josephson == Approx(reference::kJosephsonEnergy).epsilon(1e-12));
    CHECK(e.charging == Approx(reference::kChargingEnergy).epsilon(1e-12));
    CHECK(beta_L(s) == Approx(reference::kBetaL10pH).epsilon(1e-12));
    auto big = s;
    big.loop_inductance = 1e-9;
    CHECK(beta_L(big) == Approx(100.0 * reference::kBetaL10pH).epsilon(1e-12));

    auto a = fixtures::reference_array();
    CHECK(array_impedance(a, s, 0.0) / constants::resistance_quantum == Approx(reference::kZaRq_C5e17).epsilon(1e-12));
    CHECK(array_impedance(a, s, flux_from_fraction(0.45)) / constants::resistance_quantum ==
          Approx(reference::kZaRq_045).epsilon(1e-12));
    a.ground_capacitance = 5e-18;
    CHECK(array_impedance(a, s, 0.0) / constants::resistance_quantum == Approx(reference::kZaRq_C5e18).epsilon(1e-12));
}

TEST_CASE("characteristic frequency needs a normal resistance") {
    auto s = fixtures::reference_squid();
    require_code(ErrorCode::InvalidArgument, [&] { (void)characteristic_frequency(s.junction); });
    s.junction.normal_resistance = 100.0;
    CHECK(characteristic_frequency(s.junction) ==
          Approx(2.0 * std::numbers::pi * 2e-6 * 100.0 / constants::flux_quantum).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
    auto s = fixtures::reference_squid();
    s.junction.critical_current = 0.0;
    require_code(ErrorCode::InvalidArgument, [&] { validate(s); });
    auto a = fixtures::reference_array();
    a.n_cells = 1;
    require_code(ErrorCode::InvalidArgument, [&] { validate(a); });
    a = fixtures::reference_array();
    a.ground_capacitance = -1.0;
    require_code(ErrorCode::InvalidArgument, [&] { validate(a); });
}

TEST_CASE("property: inductance grows with current and flux") {
    auto g = fixtures::rng(1);
    const auto s = fixtures::reference_squid();
    for (int i = 0; i < 200; ++i) {
        const double f1 = fixtures::uniform(g, 0.0, 0.45);
        const double f2 = fixtures::uniform(g, f1, 0.49);
        const double ic = squid_critical_current(s, flux_from_fraction(f1));
        const double i1 = fixtures::uniform(g, 0.0, 0.9) * ic;
        const double i2 = fixtures::uniform(g, i1 / ic, 0.99) * ic;
        const double l11 = josephson_inductance(s, i1, flux_from_fraction(f1));
        CHECK(josephson_inductance(s, i2, flux_from_fraction(f1)) >= l11);
        CHECK(josephson_inductance(s, 0.0, flux_from_fraction(f2)) >= josephson_inductance(s, 0.0, flux_from_fraction(f1)));
        CHECK(josephson_inductance(s, -i1, flux_from_fraction(f1)) == Approx(l11).epsilon(1e-14));
        CHECK(josephson_inductance(s, 0.0, flux_from_fraction(-f1)) ==
              Approx(josephson_inductance(s, 0.0, flux_from_fraction(f1))).epsilon(1e-14));
    }
}

TEST_CASE("property: velocity follows the square-root cosine law") {
    auto g = fixtures::rng(2);
    const auto s = fixtures::reference_squid();
    const auto a = fixtures::reference_array();
    const double c0 = cell_velocity(a, s, 0.0);
    for (int i = 0; i < 200; ++i) {
        const double f = fixtures::uniform(g, -0.49, 0.49);
        CHECK(cell_velocity(a, s, flux_from_fraction(f)) / c0 ==
              Approx(std::sqrt(std::cos(std::numbers::pi * f))).epsilon(1e-12));
    }
}

TEST_CASE("validity report on the reference design") {
    const auto s = fixtures::reference_squid();
    const auto a = fixtures::reference_array();
    const auto r = validity_report(a, s, reference_pulse(), 1e11);
    REQUIRE(r.checks.size() == 6);
    CHECK(r.all_pass());
    CHECK(r.checks[0].name == "beta_L");
    REQUIRE(r.find("impedance") != nullptr);
    CHECK(r.find("impedance")->value == Approx(reference::kImpedanceCheck).epsilon(1e-12));
    CHECK(r.find("pulse_velocity")->value == Approx(0.95).epsilon(1e-12));
    CHECK(r.find("nonexistent") == nullptr);
}

TEST_CASE("validity report flags each broken assumption") {
    const auto s = fixtures::reference_squid();
    auto a = fixtures::reference_array();
    a.ground_capacitance = 5e-18;
    auto r = validity_report(a, s, reference_pulse(), 1e11);
    CHECK_FALSE(r.all_pass());
    CHECK_FALSE(r.find("impedance")->pass);
    CHECK(r.find("beta_L")->pass);

    auto big = s;
    big.loop_inductance = 1e-9;
    r = validity_report(fixtures::reference_array(), big, reference_pulse(), 1e11);
    CHECK_FALSE(r.find("beta_L")->pass);

    r = validity_report(fixtures::reference_array(), s, reference_pulse(), 1e13);
    CHECK_FALSE(r.find("signal_frequency")->pass);

    auto hot = reference_pulse();
    hot.amplitude = 0.47;
    r = validity_report(fixtures::reference_array(), s, hot, 1e11);
    CHECK_FALSE(r.find("peak_flux")->pass);
    CHECK(r.find("peak_flux")->margin < 0.0);

    auto fast = reference_pulse();
    fast.velocity = 1.2 * reference::kVelocityZeroFlux;
    r = validity_report(fixtures::reference_array(), s, fast, 1e11);
    CHECK_FALSE(r.find("pulse_velocity")->pass);
}
