#include "squid_horizon/experiments.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <thread>

#include "squid_horizon/constants.hpp"
#include "squid_horizon/csv.hpp"
#include "squid_horizon/errors.hpp"
#include "squid_horizon/lattice.hpp"
#include "squid_horizon/svg.hpp"

namespace squid_horizon::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<geometry::HorizonReport> first_black(const std::vector<geometry::HorizonReport>& horizons) {
    for (const auto& h : horizons) {
        if (h.kind == geometry::HorizonKind::Black) return h;
    }
    return std::nullopt;
}

double fraction_at(const bias::FluxPulse& pulse, double xi, double t) {
    return circuit::fraction_from_flux(bias::comoving_flux(pulse, xi, t));
}

}  // namespace

config::Setup reference_setup() { return config::resolve(config::RunConfig{}); }

// ---------------------------------------------------------------------------

Fig2Result reproduce_fig2(const config::Setup& setup) {
    Fig2Result r;
    const auto& pulse = setup.pulse;
    r.profile = geometry::velocity_profile(setup.array, setup.squid, pulse, 0.0);
    r.flux.reserve(r.profile.x.size());
    for (double xi : r.profile.x) r.flux.push_back(fraction_at(pulse, xi, 0.0));
    r.horizons = geometry::find_horizons(r.profile);
    r.unbiased_velocity = circuit::cell_velocity(setup.array, setup.squid, 0.0);
    r.velocity_ratio = pulse.velocity / r.unbiased_velocity;
    const double peak = circuit::flux_from_fraction(pulse.dc_offset + pulse.amplitude);
    r.plateau_ratio = circuit::cell_velocity(setup.array, setup.squid, peak) / r.unbiased_velocity;
    r.horizon_flux = r.horizons.empty() ? kNaN : fraction_at(pulse, r.horizons.front().position, 0.0);
    return r;
}

Fig2Result reproduce_fig2() { return reproduce_fig2(reference_setup()); }

void write_fig2_csv(const Fig2Result& result, std::ostream& out) {
    csv::Writer w(out, {"xi_m", "flux_phi0", "c_over_c0", "u_over_c0"});
    for (std::size_t i = 0; i < result.profile.x.size(); ++i) {
        w.field(result.profile.x[i]).field(result.flux[i]);
        w.field(result.profile.c[i] / result.unbiased_velocity).field(result.velocity_ratio);
        w.end_row();
    }
}

void write_fig2_horizons_csv(const Fig2Result& result, std::ostream& out) {
    csv::Writer w(out, {"xi_m", "kind", "velocity_gradient_per_s", "temperature_K", "power_W"});
    for (const auto& h : result.horizons) {
        w.field(h.position).field(geometry::to_string(h.kind)).field(h.velocity_gradient);
        w.field(h.temperature).field(h.power);
        w.end_row();
    }
}

std::string fig2_svg(const Fig2Result& result) {
    svg::LinePlot plot;
    plot.title = "Comoving velocity profile of a step flux pulse";
    plot.x_label = "xi (um)";
    plot.y_label = "velocity / c(0)";
    svg::Series c{"c(xi)/c(0)", {}, {}, false};
    svg::Series u{"u/c(0)", {}, {}, true};
    for (std::size_t i = 0; i < result.profile.x.size(); ++i) {
        const double xi = result.profile.x[i] * 1e6;
        c.x.push_back(xi);
        c.y.push_back(result.profile.c[i] / result.unbiased_velocity);
        u.x.push_back(xi);
        u.y.push_back(result.velocity_ratio);
    }
    plot.series = {c, u};
    for (const auto& h : result.horizons) {
        plot.markers.push_back({h.position * 1e6, std::string(geometry::to_string(h.kind)) + " horizon", true});
    }
    return svg::render(plot);
}

// ---------------------------------------------------------------------------

Fig3Result reproduce_fig3(double critical_current, const std::vector<double>& capacitances) {
    Fig3Result r;
    r.critical_current = critical_current;
    circuit::SquidParams squid;
    squid.junction.critical_current = critical_current;
    squid.junction.capacitance = 1.0;  // Z_A does not depend on it
    constexpr int kPoints = 99;
    for (double c0 : capacitances) {
        circuit::ArrayParams array;
        array.ground_capacitance = c0;
        ImpedanceCurve curve;
        curve.ground_capacitance = c0;
        for (int i = 0; i < kPoints; ++i) {
            const double f = 0.005 * i;
            curve.flux.push_back(f);
            curve.ratio.push_back(circuit::array_impedance(array, squid, circuit::flux_from_fraction(f)) /
                                  constants::resistance_quantum);
        }
        r.curves.push_back(std::move(curve));
    }
    return r;
}

void write_fig3_csv(const Fig3Result& result, std::ostream& out) {
    csv::Writer w(out, {"ground_capacitance_F", "flux_phi0", "za_over_rq"});
    for (const auto& c : result.curves) {
        for (std::size_t i = 0; i < c.flux.size(); ++i) {
            w.field(c.ground_capacitance).field(c.flux[i]).field(c.ratio[i]);
            w.end_row();
        }
    }
}

std::string fig3_svg(const Fig3Result& result) {
    svg::LinePlot plot;
    plot.title = "Array impedance against flux";
    plot.x_label = "flux / flux quantum";
    plot.y_label = "Z_A / R_Q";
    for (std::size_t i = 0; i < result.curves.size(); ++i) {
        const auto& c = result.curves[i];
        plot.series.push_back({"C0 = " + csv::format_number(c.ground_capacitance) + " F", c.flux, c.ratio, i % 2 == 1});
    }
    plot.markers.push_back({1.0, "Z_A = R_Q", false});
    return svg::render(plot);
}

// ---------------------------------------------------------------------------

bool BudgetReport::all_pass() const {
    return std::all_of(comparisons.begin(), comparisons.end(), [](const Comparison& c) { return c.pass(); });
}

BudgetReport temperature_budget(const config::Setup& setup, std::size_t reference_cells) {
    BudgetReport r;
    const auto& pulse = setup.pulse;
    const auto h0 = first_black(geometry::find_horizons(geometry::velocity_profile(setup.array, setup.squid, pulse, 0.0)));
    if (!h0) raise(ErrorCode::NoHorizon, "reference pulse has no black horizon");
    r.velocity_gradient = h0->velocity_gradient;
    r.temperature = h0->temperature;
    r.power = h0->power;
    r.broadening_rate = pulse.broadening_rate;
    r.reference_cells = reference_cells;

    const double t_ref = static_cast<double>(reference_cells) * setup.array.cell_length / pulse.velocity;
    const auto h1 =
        first_black(geometry::find_horizons(geometry::velocity_profile(setup.array, setup.squid, pulse, t_ref)));
    r.decay_ratio = h1 ? h1->temperature / r.temperature : 0.0;

    r.photons = geometry::photons_per_pulse(setup.array, setup.squid, pulse, setup.array.n_cells);

    r.comparisons = {
        {"hawking_temperature_mK", r.temperature * 1e3, 120.0, 119.0, 123.0},
        {"temperature_ratio_after_" + std::to_string(reference_cells) + "_cells", r.decay_ratio, 0.90, 0.89, 0.91},
        {"photons_per_pulse", r.photons.count, 1.0, 0.7, 1.3},
    };
    return r;
}

BudgetReport temperature_budget() { return temperature_budget(reference_setup()); }

void write_budget_csv(const BudgetReport& report, std::ostream& out) {
    csv::Writer w(out, {"t_s", "horizon_xi_m", "velocity_gradient_per_s", "temperature_K", "power_W"});
    for (const auto& s : report.photons.trace) {
        w.field(s.t).field(s.position).field(s.velocity_gradient).field(s.temperature).field(s.power);
        w.end_row();
    }
}

// ---------------------------------------------------------------------------

TrappingScenario default_trapping_scenario() {
    TrappingScenario s;
    s.setup = reference_setup();
    return s;
}

bool TrappingResult::one_way() const {
    return packets.size() == 2 && !packets[0].crossed && packets[1].crossed;
}

TrappingResult wavepacket_trapping(const TrappingScenario& scenario) {
    circuit::ArrayParams array = scenario.setup.array;
    array.n_cells = scenario.n_cells;
    const auto& squid = scenario.setup.squid;
    const double a = array.cell_length;

    bias::FluxPulse pulse = scenario.setup.pulse;
    pulse.broadening_rate = 0.0;
    pulse.front_position = scenario.front_cells * a;

    TrappingResult result;
    std::optional<bias::FluxField> field;
    if (scenario.with_pulse) {
        const auto h = first_black(geometry::find_horizons(geometry::velocity_profile(array, squid, pulse, 0.0)));
        if (!h) raise(ErrorCode::NoHorizon, "trapping scenario needs a black horizon");
        result.velocity = pulse.velocity;
        result.horizon_position = h->position;
        field = bias::FluxField::moving(pulse);
    } else {
        result.velocity = 0.0;
        result.horizon_position = pulse.front_position;
        field = bias::FluxField::uniform(0.0);
    }
    const double u = result.velocity;
    const double separation = scenario.separation_cells * a;

    for (int which = 0; which < 2; ++which) {
        PacketOutcome p;
        p.label = which == 0 ? "behind-forward" : "ahead-backward";
        p.direction = which == 0 ? +1 : -1;
        p.start_offset = which == 0 ? -separation : separation;
        const double start = result.horizon_position + p.start_offset;
        const double flux = scenario.with_pulse ? bias::comoving_flux(pulse, start, 0.0) : 0.0;
        p.lab_speed = circuit::cell_velocity(array, squid, flux) * std::cos(0.5 * scenario.ka);
        p.window = scenario.traversals * separation / p.lab_speed;

        lattice::SolverConfig cfg;
        cfg.courant_fraction = scenario.courant_fraction;
        cfg.boundary = lattice::Boundary::Absorbing;
        cfg.record_fields = false;
        lattice::Lattice lat(array, squid, *field, cfg);
        auto state = lat.gaussian_packet({start, scenario.sigma_cells * a, scenario.ka, 1e-6, p.direction});
        const double e0 = lat.energy(state);
        const auto n_steps = static_cast<std::size_t>(std::ceil(p.window / lat.dt()));
        const std::size_t every = std::max<std::size_t>(scenario.record_every, 1);

        for (std::size_t i = 0; i <= n_steps; ++i) {
            if (i > 0) lat.step(state);
            if (i % every != 0 && i != n_steps) continue;
            lattice::Record rec;
            rec.t = state.t;
            rec.energy_density = lat.energy_density(state);
            const double e = std::accumulate(rec.energy_density.begin(), rec.energy_density.end(), 0.0);
            if (!(e > 1e-6 * e0)) break;  // left the line
            const double x = lattice::energy_centroid(rec, a);
            const double xi = x - u * state.t;
            p.trace.push_back({state.t, x, xi});
            const bool past = which == 0 ? xi > result.horizon_position : xi < result.horizon_position;
            if (past) {
                p.crossed = true;
                p.crossing_time = state.t;
                break;
            }
        }
        result.packets.push_back(std::move(p));
    }
    return result;
}

void write_trapping_csv(const TrappingResult& result, std::ostream& out) {
    csv::Writer w(out, {"packet", "t_s", "x_m", "xi_m", "xi_minus_horizon_m"});
    for (const auto& p : result.packets) {
        for (const auto& s : p.trace) {
            w.field(p.label).field(s.t).field(s.x).field(s.xi).field(s.xi - result.horizon_position);
            w.end_row();
        }
    }
}

// ---------------------------------------------------------------------------

const char* to_string(SweepOutput output) noexcept {
    switch (output) {
    case SweepOutput::HawkingTemperature: return "T_H_K";
    case SweepOutput::ImpedanceRatio: return "ZA_over_RQ";
    case SweepOutput::Velocity: return "c_m_s";
    case SweepOutput::HorizonCount: return "horizon_count";
    case SweepOutput::PhotonCount: return "photon_count";
    }
    return "?";
}

SweepOutput parse_sweep_output(std::string_view name) {
    for (auto o : {SweepOutput::HawkingTemperature, SweepOutput::ImpedanceRatio, SweepOutput::Velocity,
                   SweepOutput::HorizonCount, SweepOutput::PhotonCount}) {
        if (name == to_string(o)) return o;
    }
    raise(ErrorCode::ConfigError, "unknown sweep output '" + std::string(name) +
                                      "' (expected T_H_K, ZA_over_RQ, c_m_s, horizon_count or photon_count)");
}

void validate(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2) raise(ErrorCode::ConfigError, "a sweep needs one or two axes");
    for (const auto& axis : spec.axes) {
        config::require_key_path(axis.path);
        if (axis.values.empty()) raise(ErrorCode::ConfigError, "sweep axis '" + axis.path + "' has no values");
    }
    if (spec.outputs.empty()) raise(ErrorCode::ConfigError, "a sweep needs at least one output");
}

SweepSpec parse_sweep_spec(std::string_view text, const config::RunConfig& fallback_base) {
    using Json = nlohmann::json;
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        raise(ErrorCode::ParseError, std::string("sweep specification: ") + e.what());
    }
    if (!root.is_object()) raise(ErrorCode::ConfigError, "sweep specification must be a JSON object");
    for (const auto& item : root.items()) {
        const std::vector<std::string> keys{"base", "axes", "outputs"};
        if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
            raise(ErrorCode::UnknownKey, "unknown sweep key '" + item.key() + "'; did you mean '" +
                                             config::nearest_key(item.key(), keys) + "'?");
        }
    }
    SweepSpec spec;
    spec.base = root.contains("base") ? config::parse_config(root.at("base").dump()) : fallback_base;
    if (!root.contains("axes") || !root.at("axes").is_array()) {
        raise(ErrorCode::ConfigError, "'axes' must be an array of {\"path\", \"values\"}");
    }
    for (const auto& a : root.at("axes")) {
        if (!a.is_object() || !a.contains("path") || !a.at("path").is_string() || !a.contains("values") ||
            !a.at("values").is_array()) {
            raise(ErrorCode::ConfigError, "'axes' entries need a string 'path' and an array 'values'");
        }
        SweepAxis axis;
        axis.path = a.at("path").get<std::string>();
        for (const auto& v : a.at("values")) {
            if (!v.is_number()) raise(ErrorCode::ConfigError, "sweep axis '" + axis.path + "' has a non-numeric value");
            axis.values.push_back(v.get<double>());
        }
        spec.axes.push_back(std::move(axis));
    }
    if (root.contains("outputs")) {
        if (!root.at("outputs").is_array()) raise(ErrorCode::ConfigError, "'outputs' must be an array of names");
        for (const auto& o : root.at("outputs")) {
            if (!o.is_string()) raise(ErrorCode::ConfigError, "'outputs' must be an array of names");
            spec.outputs.push_back(parse_sweep_output(o.get<std::string>()));
        }
    } else {
        spec.outputs = {SweepOutput::HawkingTemperature, SweepOutput::ImpedanceRatio, SweepOutput::Velocity,
                        SweepOutput::HorizonCount};
    }
    validate(spec);
    return spec;
}

std::vector<double> evaluate_point(const config::RunConfig& config, const std::vector<SweepOutput>& outputs) {
    const auto setup = config::resolve(config);
    const double dc = circuit::flux_from_fraction(setup.pulse.dc_offset);

    std::optional<std::vector<geometry::HorizonReport>> horizons;
    auto get_horizons = [&]() -> const std::vector<geometry::HorizonReport>& {
        if (!horizons) {
            horizons = geometry::find_horizons(geometry::velocity_profile(setup.array, setup.squid, setup.pulse, 0.0));
        }
        return *horizons;
    };

    std::vector<double> values;
    for (auto o : outputs) {
        switch (o) {
        case SweepOutput::HawkingTemperature: {
            const auto h = first_black(get_horizons());
            values.push_back(h ? h->temperature : 0.0);
            break;
        }
        case SweepOutput::ImpedanceRatio:
            values.push_back(circuit::array_impedance(setup.array, setup.squid, dc) / constants::resistance_quantum);
            break;
        case SweepOutput::Velocity:
            values.push_back(circuit::cell_velocity(setup.array, setup.squid, dc));
            break;
        case SweepOutput::HorizonCount:
            values.push_back(static_cast<double>(get_horizons().size()));
            break;
        case SweepOutput::PhotonCount:
            values.push_back(first_black(get_horizons())
                                 ? geometry::photons_per_pulse(setup.array, setup.squid, setup.pulse,
                                                               setup.array.n_cells)
                                       .count
                                 : 0.0);
            break;
        }
    }
    return values;
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers) {
    validate(spec);
    SweepResult result;
    result.outputs = spec.outputs;
    for (const auto& a : spec.axes) result.axis_paths.push_back(a.path);

    const std::size_t n0 = spec.axes[0].values.size();
    const std::size_t n1 = spec.axes.size() > 1 ? spec.axes[1].values.size() : 1;
    result.rows.resize(n0 * n1);
    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            auto& row = result.rows[i * n1 + j];
            row.coordinates.push_back(spec.axes[0].values[i]);
            if (spec.axes.size() > 1) row.coordinates.push_back(spec.axes[1].values[j]);
        }
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < result.rows.size(); k = next++) {
            auto& row = result.rows[k];
            try {
                config::RunConfig cfg = spec.base;
                for (std::size_t a = 0; a < spec.axes.size(); ++a) {
                    cfg = config::with_value(cfg, spec.axes[a].path, row.coordinates[a]);
                }
                row.values = evaluate_point(cfg, spec.outputs);
            } catch (const std::exception& e) {
                row.values.assign(spec.outputs.size(), kNaN);
                row.error = e.what();
            }
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, result.rows.size());
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    std::vector<std::string> header = result.axis_paths;
    for (auto o : result.outputs) header.emplace_back(to_string(o));
    header.emplace_back("error");
    csv::Writer w(out, header);
    for (const auto& row : result.rows) {
        for (double c : row.coordinates) w.field(c);
        for (double v : row.values) w.field(v);
        w.field(std::string_view(row.error));
        w.end_row();
    }
}

}  // namespace squid_horizon::experiments
