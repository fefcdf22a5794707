#include "squid_horizon_cli/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include "squid_horizon/config.hpp"
#include "squid_horizon/constants.hpp"
#include "squid_horizon/csv.hpp"
#include "squid_horizon/dispersion.hpp"
#include "squid_horizon/errors.hpp"
#include "squid_horizon/experiments.hpp"
#include "squid_horizon/geometry.hpp"
#include "squid_horizon/lattice.hpp"
#include "squid_horizon/svg.hpp"
#include "squid_horizon/validity.hpp"

namespace squid_horizon::cli {

namespace {

namespace fs = std::filesystem;
using csv::format_number;

constexpr const char* kDefaultOutDir = "squid_horizon_out";
constexpr const char* kOutEnv = "SQUID_HORIZON_OUT";

struct Options {
    std::string config_path;
    std::string out_dir;
    std::size_t workers = 0;  // 0: from configuration
    std::vector<std::string> emit;
    bool seedless = false;
    bool json = false;
    double time = 0.0;
    bool static_field = false;
    std::string figure;
    std::string sweep_path;
};

struct Context {
    config::RunConfig config;
    fs::path out_dir;
    std::size_t workers = 1;
    std::vector<std::string> emit;
    std::ostream& out;

    [[nodiscard]] bool emits(const std::string& kind) const {
        return std::find(emit.begin(), emit.end(), kind) != emit.end();
    }

    std::ofstream open(const std::string& name) const {
        fs::create_directories(out_dir);
        std::ofstream f(out_dir / name, std::ios::binary);
        if (!f) raise(ErrorCode::ConfigError, "cannot write '" + (out_dir / name).string() + "'");
        return f;
    }

    void wrote(const std::string& name) const { out << "wrote " << (out_dir / name).string() << '\n'; }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) const {
        auto f = open(name);
        body(f);
        wrote(name);
    }

    void write_text(const std::string& name, const std::string& text) const {
        write(name, [&](std::ostream& f) { f << text; });
    }
};

Context make_context(const Options& opt, std::ostream& out) {
    Context ctx{config::RunConfig{}, {}, 1, {}, out};
    if (!opt.config_path.empty()) ctx.config = config::load_config(opt.config_path);
    if (!opt.out_dir.empty()) {
        ctx.out_dir = opt.out_dir;
    } else if (const char* env = std::getenv(kOutEnv); env && *env) {
        ctx.out_dir = env;
    } else if (!ctx.config.output.dir.empty()) {
        ctx.out_dir = ctx.config.output.dir;
    } else {
        ctx.out_dir = kDefaultOutDir;
    }
    ctx.workers = std::max<std::size_t>(1, opt.workers ? opt.workers : ctx.config.output.workers);
    ctx.emit = opt.emit.empty() ? ctx.config.output.emit : opt.emit;
    for (const auto& e : ctx.emit) {
        if (e != "csv" && e != "svg" && e != "bin") raise(ErrorCode::ConfigError, "unknown --emit format '" + e + "'");
    }
    return ctx;
}

std::string compare_symbol(circuit::Comparison c) {
    switch (c) {
    case circuit::Comparison::AtMost: return "<=";
    case circuit::Comparison::Below: return "<";
    case circuit::Comparison::Above: return ">";
    }
    return "?";
}

void print_row(std::ostream& out, const std::string& name, const std::string& a, const std::string& b,
               const std::string& c) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-34s %-24s %-24s %s\n", name.c_str(), a.c_str(), b.c_str(), c.c_str());
    out << line;
}

// validate -------------------------------------------------------------------

int cmd_validate(const Context& ctx, const Options& opt) {
    const auto setup = config::resolve(ctx.config);
    const auto report =
        circuit::validity_report(setup.array, setup.squid, setup.pulse, setup.max_signal_frequency, setup.limits);
    if (opt.json) {
        nlohmann::ordered_json j;
        j["all_pass"] = report.all_pass();
        for (const auto& c : report.checks) {
            j["checks"].push_back({{"name", c.name},
                                   {"value", c.value},
                                   {"comparison", compare_symbol(c.comparison)},
                                   {"threshold", c.threshold},
                                   {"pass", c.pass},
                                   {"margin", c.margin}});
        }
        ctx.out << j.dump(2) << '\n';
    } else {
        print_row(ctx.out, "check", "value", "requirement", "result");
        for (const auto& c : report.checks) {
            print_row(ctx.out, c.name, format_number(c.value), compare_symbol(c.comparison) + " " + format_number(c.threshold),
                      c.pass ? "pass" : "FAIL");
        }
        ctx.out << (report.all_pass() ? "all checks pass\n" : "validity checks failed\n");
    }
    if (ctx.emits("csv")) {
        ctx.write("validity.csv", [&](std::ostream& f) {
            csv::Writer w(f, {"check", "value", "comparison", "threshold", "pass", "margin"});
            for (const auto& c : report.checks) {
                w.field(c.name).field(c.value).field(compare_symbol(c.comparison)).field(c.threshold);
                w.field(c.pass ? "true" : "false").field(c.margin);
                w.end_row();
            }
        });
    }
    return report.all_pass() ? kOk : kCheckFailed;
}

// profile ----------------------------------------------------------------------

int cmd_profile(const Context& ctx, const Options& opt) {
    const auto setup = config::resolve(ctx.config);
    const auto profile = geometry::velocity_profile(setup.array, setup.squid, setup.pulse, opt.time);
    const auto horizons = geometry::find_horizons(profile);
    ctx.out << "pulse velocity u = " << format_number(profile.u) << " m/s, steepness s0 = "
            << format_number(setup.pulse.steepness) << " 1/m, broadening b = "
            << format_number(setup.pulse.broadening_rate) << " 1/m\n";
    ctx.out << horizons.size() << " horizon(s) at t = " << format_number(opt.time) << " s\n";
    for (const auto& h : horizons) {
        ctx.out << "  " << geometry::to_string(h.kind) << " at xi = " << format_number(h.position)
                << " m, |dc/dx| = " << format_number(h.velocity_gradient)
                << " 1/s, T_H = " << format_number(h.temperature) << " K, P = " << format_number(h.power) << " W\n";
    }
    if (ctx.emits("csv")) {
        ctx.write("profile.csv", [&](std::ostream& f) {
            csv::Writer w(f, {"xi_m", "flux_phi0", "c_m_s", "c_over_u"});
            for (std::size_t i = 0; i < profile.x.size(); ++i) {
                const double flux = circuit::fraction_from_flux(bias::comoving_flux(setup.pulse, profile.x[i], opt.time));
                w.field(profile.x[i]).field(flux).field(profile.c[i]).field(profile.c[i] / profile.u);
                w.end_row();
            }
        });
        ctx.write("horizons.csv", [&](std::ostream& f) {
            csv::Writer w(f, {"xi_m", "kind", "velocity_gradient_per_s", "temperature_K", "power_W"});
            for (const auto& h : horizons) {
                w.field(h.position).field(geometry::to_string(h.kind)).field(h.velocity_gradient);
                w.field(h.temperature).field(h.power);
                w.end_row();
            }
        });
    }
    if (ctx.emits("svg")) {
        svg::LinePlot plot;
        plot.title = "Comoving velocity profile";
        plot.x_label = "xi (um)";
        plot.y_label = "c (m/s)";
        svg::Series c{"c(xi)", {}, {}, false}, u{"u", {}, {}, true};
        for (std::size_t i = 0; i < profile.x.size(); ++i) {
            c.x.push_back(profile.x[i] * 1e6);
            c.y.push_back(profile.c[i]);
            u.x.push_back(profile.x[i] * 1e6);
            u.y.push_back(profile.u);
        }
        plot.series = {c, u};
        for (const auto& h : horizons) plot.markers.push_back({h.position * 1e6, geometry::to_string(h.kind), true});
        ctx.write_text("profile.svg", svg::render(plot));
    }
    return kOk;
}

// simulate -------------------------------------------------------------------

int cmd_simulate(const Context& ctx, const Options& opt) {
    const auto setup = config::resolve(ctx.config);
    const auto& sc = ctx.config.solver;
    const double a = setup.array.cell_length;

    lattice::SolverConfig cfg;
    cfg.dt = sc.dt.value_or(0.0);
    cfg.n_steps = sc.n_steps;
    cfg.courant_fraction = sc.courant_fraction;
    cfg.boundary = sc.boundary;
    cfg.record_every = sc.record_every;
    cfg.current_dependent_inductance = sc.current_dependent_inductance;
    cfg.record_fields = ctx.emits("csv") || ctx.emits("bin");

    const auto field = opt.static_field ? bias::FluxField::uniform(setup.pulse.dc_offset)
                                        : bias::FluxField::moving(setup.pulse);
    lattice::Lattice lat(setup.array, setup.squid, field, cfg);

    const auto& pk = sc.packet;
    lattice::LatticeState initial;
    if (sc.boundary == lattice::Boundary::DrivenLeftAbsorbingRight) {
        const double l = lat.inductances(0.0).front();
        const double omega = dispersion::omega_analytic(pk.ka / a, l, setup.array.ground_capacitance, a);
        lat.set_drive(lattice::inject_sine(lat, pk.amplitude, omega));
        initial = lat.zero_state();
        ctx.out << "driving the left end at " << format_number(omega) << " rad/s\n";
    } else {
        initial = lat.gaussian_packet({pk.center_cells * a, pk.sigma_cells * a, pk.ka, pk.amplitude, pk.direction});
    }

    const auto traj = lattice::run(lat, initial);
    const double e0 = traj.records.front().energy;
    const double e1 = traj.records.back().energy;
    ctx.out << "steps " << cfg.n_steps << ", dt " << format_number(lat.dt()) << " s, " << traj.records.size()
            << " records\n";
    ctx.out << "energy " << format_number(e0) << " -> " << format_number(e1) << " J\n";
    try {
        ctx.out << "packet speed " << format_number(lattice::measure_pulse_speed(traj)) << " m/s\n";
    } catch (const Error&) {
        ctx.out << "packet speed not measurable (no localized packet)\n";
    }

    if (ctx.emits("csv")) {
        ctx.write("trajectory.csv", [&](std::ostream& f) { lattice::write_csv(traj, f); });
        ctx.write("energy.csv", [&](std::ostream& f) {
            csv::Writer w(f, {"t_s", "energy_J", "centroid_m"});
            for (const auto& r : traj.records) {
                double centroid = std::numeric_limits<double>::quiet_NaN();
                try {
                    centroid = lattice::energy_centroid(r, a);
                } catch (const Error&) {
                }
                w.field(r.t).field(r.energy).field(centroid);
                w.end_row();
            }
        });
    }
    if (ctx.emits("bin")) ctx.write("trajectory.bin", [&](std::ostream& f) { lattice::write_binary(traj, f); });
    return kOk;
}

// dispersion -----------------------------------------------------------------

int cmd_dispersion(const Context& ctx, const Options&) {
    const auto setup = config::resolve(ctx.config);
    const double a = setup.array.cell_length;
    const double dc = circuit::flux_from_fraction(setup.pulse.dc_offset);
    const double l = circuit::josephson_inductance(setup.squid, 0.0, dc);
    const double c0 = setup.array.ground_capacitance;
    std::vector<double> freqs;
    for (double ka : ctx.config.dispersion.ka_points) freqs.push_back(dispersion::omega_analytic(ka / a, l, c0, a));

    dispersion::MeasureOptions mo;
    mo.courant_fraction = ctx.config.solver.courant_fraction;
    mo.workers = ctx.workers;
    const auto curve = dispersion::measure_dispersion(setup.array, setup.squid, dc, freqs, mo);

    print_row(ctx.out, "ka", "omega measured (rad/s)", "omega analytic (rad/s)", "relative error");
    for (const auto& p : curve.points) {
        print_row(ctx.out, format_number(p.k * a), format_number(p.omega_measured), format_number(p.omega_analytic),
                  format_number(p.rel_error));
    }
    if (ctx.emits("csv")) {
        ctx.write("dispersion.csv", [&](std::ostream& f) {
            csv::Writer w(f, {"k_per_m", "ka", "omega_measured_rad_s", "omega_analytic_rad_s", "rel_error",
                              "fit_residual_rad"});
            for (const auto& p : curve.points) {
                w.field(p.k).field(p.k * a).field(p.omega_measured).field(p.omega_analytic);
                w.field(p.rel_error).field(p.fit_residual);
                w.end_row();
            }
        });
    }
    if (ctx.emits("svg")) {
        svg::LinePlot plot;
        plot.title = "Lattice dispersion";
        plot.x_label = "ka";
        plot.y_label = "omega (rad/s)";
        svg::Series analytic{"analytic", {}, {}, false}, measured{"measured", {}, {}, true};
        for (int i = 0; i <= 100; ++i) {
            const double ka = 3.141592653589793 * i / 100.0;
            analytic.x.push_back(ka);
            analytic.y.push_back(dispersion::omega_analytic(ka / a, l, c0, a));
        }
        for (const auto& p : curve.points) {
            measured.x.push_back(p.k * a);
            measured.y.push_back(p.omega_measured);
        }
        plot.series = {analytic, measured};
        ctx.write_text("dispersion.svg", svg::render(plot));
    }
    return kOk;
}

// budget -----------------------------------------------------------------------

void print_budget(const Context& ctx, const experiments::BudgetReport& r, bool compare) {
    ctx.out << "Hawking temperature   " << format_number(r.temperature) << " K (|dc/dx| = "
            << format_number(r.velocity_gradient) << " 1/s)\n";
    ctx.out << "radiated power        " << format_number(r.power) << " W\n";
    ctx.out << "broadening rate       " << format_number(r.broadening_rate) << " 1/m\n";
    ctx.out << "T_H after " << r.reference_cells << " cells  " << format_number(r.decay_ratio) << " of initial\n";
    ctx.out << "photons per pulse     " << format_number(r.photons.count) << " over "
            << format_number(r.photons.traversal_time) << " s\n";
    if (compare) {
        print_row(ctx.out, "quantity", "value", "expected range", "result");
        for (const auto& c : r.comparisons) {
            print_row(ctx.out, c.name, format_number(c.value),
                      "[" + format_number(c.lower) + ", " + format_number(c.upper) + "]", c.pass() ? "pass" : "FAIL");
        }
    }
    if (ctx.emits("csv")) ctx.write("budget.csv", [&](std::ostream& f) { experiments::write_budget_csv(r, f); });
}

int cmd_budget(const Context& ctx, const Options&) {
    const auto setup = config::resolve(ctx.config);
    print_budget(ctx, experiments::temperature_budget(setup, ctx.config.pulse.broadening_reference_cells), false);
    return kOk;
}

// reproduce --------------------------------------------------------------------

int reproduce_fig2(const Context& ctx) {
    const auto r = experiments::reproduce_fig2();
    ctx.out << "u/c(0) = " << format_number(r.velocity_ratio) << ", plateau c/c(0) = " << format_number(r.plateau_ratio)
            << ", " << r.horizons.size() << " horizon(s)";
    if (!r.horizons.empty()) ctx.out << ", horizon flux " << format_number(r.horizon_flux) << " Phi0";
    ctx.out << '\n';
    if (ctx.emits("csv")) {
        ctx.write("fig2_profile.csv", [&](std::ostream& f) { experiments::write_fig2_csv(r, f); });
        ctx.write("fig2_horizons.csv", [&](std::ostream& f) { experiments::write_fig2_horizons_csv(r, f); });
    }
    if (ctx.emits("svg")) ctx.write_text("fig2.svg", experiments::fig2_svg(r));
    return r.horizons.size() == 1 ? kOk : kCheckFailed;
}

int reproduce_fig3(const Context& ctx) {
    const auto r = experiments::reproduce_fig3();
    for (const auto& c : r.curves) {
        ctx.out << "C0 = " << format_number(c.ground_capacitance) << " F: Z_A/R_Q(0) = " << format_number(c.ratio.front())
                << ", at " << format_number(c.flux.back()) << " Phi0 = " << format_number(c.ratio.back()) << '\n';
    }
    if (ctx.emits("csv")) ctx.write("fig3_impedance.csv", [&](std::ostream& f) { experiments::write_fig3_csv(r, f); });
    if (ctx.emits("svg")) ctx.write_text("fig3.svg", experiments::fig3_svg(r));
    return kOk;
}

int reproduce_budget(const Context& ctx) {
    const auto r = experiments::temperature_budget();
    print_budget(ctx, r, true);
    return r.all_pass() ? kOk : kCheckFailed;
}

int reproduce_trapping(const Context& ctx) {
    const auto r = experiments::wavepacket_trapping(experiments::default_trapping_scenario());
    ctx.out << "horizon at xi = " << format_number(r.horizon_position) << " m, u = " << format_number(r.velocity)
            << " m/s\n";
    for (const auto& p : r.packets) {
        ctx.out << "  " << p.label << ": " << (p.crossed ? "crossed at " + format_number(p.crossing_time) + " s"
                                                         : "trapped for " + format_number(p.window) + " s")
                << '\n';
    }
    ctx.out << (r.one_way() ? "one-way horizon confirmed\n" : "one-way behaviour NOT observed\n");
    if (ctx.emits("csv")) ctx.write("trapping.csv", [&](std::ostream& f) { experiments::write_trapping_csv(r, f); });
    return r.one_way() ? kOk : kCheckFailed;
}

int cmd_reproduce(const Context& ctx, const Options& opt) {
    if (opt.figure == "fig2") return reproduce_fig2(ctx);
    if (opt.figure == "fig3") return reproduce_fig3(ctx);
    if (opt.figure == "budget") return reproduce_budget(ctx);
    return reproduce_trapping(ctx);
}

// sweep ------------------------------------------------------------------------

int cmd_sweep(const Context& ctx, const Options& opt) {
    std::ifstream in(opt.sweep_path, std::ios::binary);
    if (!in) raise(ErrorCode::ConfigError, "cannot read sweep specification '" + opt.sweep_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    const auto spec = experiments::parse_sweep_spec(text.str(), ctx.config);
    const auto result = experiments::run_sweep(spec, ctx.workers);
    std::size_t failed = 0;
    for (const auto& row : result.rows) failed += row.error.empty() ? 0 : 1;
    ctx.out << result.rows.size() << " points, " << failed << " failed, " << ctx.workers << " worker(s)\n";
    ctx.write("sweep.csv", [&](std::ostream& f) { experiments::write_sweep_csv(result, f); });
    return kOk;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::FluxOutOfRange:
    case ErrorCode::OverCritical:
    case ErrorCode::CourantViolation:
    case ErrorCode::BandLimit:
    case ErrorCode::OutOfBand:
    case ErrorCode::ConfigError:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownKey: return kConfigError;
    default: return kRuntimeError;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analogue event horizons in dc-SQUID transmission lines", "squid-horizon"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config_path, "JSON configuration file");
    app.add_option("--out", opt.out_dir, "Output directory (default: $SQUID_HORIZON_OUT, config output.dir, ./squid_horizon_out)");
    app.add_option("--workers", opt.workers, "Worker threads for sweeps and dispersion runs")->check(CLI::PositiveNumber);
    app.add_option("--emit", opt.emit, "Output formats: csv,svg,bin")->delimiter(',');
    app.add_flag("--seedless", opt.seedless, "Accepted for scripts; every command is deterministic");

    std::function<int(const Context&, const Options&)> action;
    auto sub = [&](const char* name, const char* help, int (*fn)(const Context&, const Options&)) {
        auto* s = app.add_subcommand(name, help);
        s->callback([&action, fn] { action = fn; });
        return s;
    };
    sub("validate", "Check the model's validity conditions", cmd_validate)
        ->add_flag("--json", opt.json, "Print the report as JSON");
    sub("profile", "Velocity profile, horizons and Hawking temperature", cmd_profile)
        ->add_option("--time", opt.time, "Snapshot time in seconds");
    sub("simulate", "Run the lattice solver", cmd_simulate)
        ->add_flag("--static", opt.static_field, "Hold the flux at the dc offset instead of moving the pulse");
    sub("dispersion", "Measured against analytic lattice dispersion", cmd_dispersion);
    sub("budget", "Temperature and photon budget for the configured pulse", cmd_budget);
    sub("reproduce", "Reference reproductions", cmd_reproduce)
        ->add_option("figure", opt.figure, "fig2, fig3, budget or trapping")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "budget", "trapping"}));
    sub("sweep", "Parameter sweep from a specification file", cmd_sweep)
        ->add_option("spec", opt.sweep_path, "Sweep specification (JSON)")
        ->required();
    auto* show = app.add_subcommand("show-config", "Print the effective configuration as JSON");
    show->callback([&action] {
        action = [](const Context& ctx, const Options&) {
            ctx.out << config::to_json(ctx.config);
            return static_cast<int>(kOk);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        const Context ctx = make_context(opt, out);
        return action(ctx, opt);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace squid_horizon::cli
