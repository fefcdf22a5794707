#include "squid_horizon/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "squid_horizon/errors.hpp"
#include "squid_horizon/geometry.hpp"

namespace squid_horizon::config {

namespace {

using Json = nlohmann::ordered_json;

const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"", {"junction", "squid", "array", "pulse", "solver", "validity", "dispersion", "output"}},
        {"junction", {"critical_current_A", "capacitance_F", "plasma_frequency_rad_s", "normal_resistance_ohm"}},
        {"squid", {"loop_inductance_H"}},
        {"array", {"n_cells", "cell_length_m", "ground_capacitance_F", "environment_impedance_ohm"}},
        {"pulse",
         {"shape", "amplitude_phi0", "dc_offset_phi0", "velocity_m_s", "velocity_ratio", "steepness_per_m",
          "front_position_m", "broadening_per_m", "broadening_target_decay", "broadening_reference_cells"}},
        {"solver",
         {"dt_s", "n_steps", "courant_fraction", "boundary", "record_every", "current_dependent_inductance",
          "packet"}},
        {"solver.packet", {"center_cells", "sigma_cells", "ka", "amplitude_V", "direction"}},
        {"validity", {"max_signal_frequency_rad_s", "beta_L_max", "flux_max_phi0", "frequency_fraction"}},
        {"dispersion", {"ka_points"}},
        {"output", {"dir", "emit", "workers"}},
    };
    return keys;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::vector<std::string> split(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t dot = path.find('.', start);
        const std::size_t end = dot == std::string_view::npos ? path.size() : dot;
        parts.emplace_back(path.substr(start, end - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return parts;
}

class Reader {
public:
    Reader(std::string_view text, const Json& obj, std::string section)
        : text_(text), obj_(obj), section_(std::move(section)) {
        if (!obj_.is_object()) fail(section_, "must be a JSON object");
        const auto& allowed = schema().at(section_);
        for (const auto& item : obj_.items()) {
            if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
                std::ostringstream os;
                os << "unknown key '" << qualified(item.key()) << "' (line " << line_of(item.key())
                   << "); did you mean '" << nearest_key(item.key(), allowed) << "'?";
                raise(ErrorCode::UnknownKey, os.str());
            }
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }
    [[nodiscard]] const Json& at(const std::string& key) const { return obj_.at(key); }

    void number(const std::string& key, double& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) fail(key, "expected a finite number");
    }

    void number(const std::string& key, std::optional<double>& out) const {
        if (!has(key)) return;
        double v = 0.0;
        number(key, v);
        out = v;
    }

    /// Number, or the given keyword meaning "derive it" (maps to nullopt).
    void number_or(const std::string& key, std::string_view keyword, std::optional<double>& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (v.is_string() && v.get<std::string>() == keyword) {
            out.reset();
            return;
        }
        if (!v.is_number()) fail(key, "expected a number or \"" + std::string(keyword) + "\"");
        number(key, out);
    }

    void count(const std::string& key, std::size_t& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "expected a non-negative integer");
        out = v.get<std::size_t>();
    }

    void boolean(const std::string& key, bool& out) const {
        if (!has(key)) return;
        if (!obj_.at(key).is_boolean()) fail(key, "expected true or false");
        out = obj_.at(key).get<bool>();
    }

    [[nodiscard]] std::string string(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        if (!obj_.at(key).is_string()) fail(key, "expected a string");
        return obj_.at(key).get<std::string>();
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        std::ostringstream os;
        os << "'" << qualified(key) << "' (line " << line_of(key) << "): " << what;
        raise(ErrorCode::ConfigError, os.str());
    }

    [[nodiscard]] std::string qualified(const std::string& key) const {
        return section_.empty() ? key : section_ + "." + key;
    }

private:
    [[nodiscard]] std::size_t line_of(const std::string& key) const {
        std::size_t pos = 0;
        auto parts = split(section_);
        if (section_.empty()) parts.clear();
        parts.push_back(key);
        for (const auto& p : parts) {
            const auto found = text_.find("\"" + p + "\"", pos);
            if (found == std::string_view::npos) break;
            pos = found;
        }
        return line_column(text_, pos).first;
    }

    std::string_view text_;
    const Json& obj_;
    std::string section_;
};

bias::PulseShape parse_shape(const Reader& r, const std::string& s) {
    if (s == "tanh") return bias::PulseShape::TanhStep;
    if (s == "gaussian") return bias::PulseShape::Gaussian;
    r.fail("shape", "expected \"tanh\" or \"gaussian\"");
}

const char* shape_name(bias::PulseShape s) { return s == bias::PulseShape::Gaussian ? "gaussian" : "tanh"; }

lattice::Boundary parse_boundary(const Reader& r, const std::string& s) {
    if (s == "reflecting") return lattice::Boundary::Reflecting;
    if (s == "absorbing") return lattice::Boundary::Absorbing;
    if (s == "driven-left+absorbing-right") return lattice::Boundary::DrivenLeftAbsorbingRight;
    r.fail("boundary", "expected \"reflecting\", \"absorbing\" or \"driven-left+absorbing-right\"");
}

const char* boundary_name(lattice::Boundary b) {
    switch (b) {
    case lattice::Boundary::Reflecting: return "reflecting";
    case lattice::Boundary::Absorbing: return "absorbing";
    case lattice::Boundary::DrivenLeftAbsorbingRight: return "driven-left+absorbing-right";
    }
    return "absorbing";
}

RunConfig from_json(std::string_view text, const Json& root) {
    RunConfig cfg;
    const Reader top(text, root, "");

    if (top.has("junction")) {
        const Reader r(text, top.at("junction"), "junction");
        auto& j = cfg.junction;
        r.number("critical_current_A", j.critical_current);
        if (r.has("capacitance_F") && r.has("plasma_frequency_rad_s")) {
            r.fail("capacitance_F", "give either capacitance_F or plasma_frequency_rad_s, not both");
        }
        if (r.has("capacitance_F")) {
            j.plasma_frequency.reset();
            r.number("capacitance_F", j.capacitance);
        }
        r.number("plasma_frequency_rad_s", j.plasma_frequency);
        r.number("normal_resistance_ohm", j.normal_resistance);
    }
    if (top.has("squid")) {
        const Reader r(text, top.at("squid"), "squid");
        r.number("loop_inductance_H", cfg.squid.loop_inductance);
    }
    if (top.has("array")) {
        const Reader r(text, top.at("array"), "array");
        auto& a = cfg.array;
        r.count("n_cells", a.n_cells);
        r.number("cell_length_m", a.cell_length);
        r.number("ground_capacitance_F", a.ground_capacitance);
        r.number("environment_impedance_ohm", a.environment_impedance);
    }
    if (top.has("pulse")) {
        const Reader r(text, top.at("pulse"), "pulse");
        auto& p = cfg.pulse;
        p.shape = parse_shape(r, r.string("shape", shape_name(p.shape)));
        r.number("amplitude_phi0", p.amplitude);
        r.number("dc_offset_phi0", p.dc_offset);
        if (r.has("velocity_m_s") && r.has("velocity_ratio")) {
            r.fail("velocity_m_s", "give either velocity_m_s or velocity_ratio, not both");
        }
        r.number("velocity_m_s", p.velocity);
        r.number("velocity_ratio", p.velocity_ratio);
        r.number_or("steepness_per_m", "auto", p.steepness);
        r.number("front_position_m", p.front_position);
        r.number_or("broadening_per_m", "calibrate", p.broadening_rate);
        r.number("broadening_target_decay", p.broadening_target_decay);
        r.count("broadening_reference_cells", p.broadening_reference_cells);
    }
    if (top.has("solver")) {
        const Reader r(text, top.at("solver"), "solver");
        auto& s = cfg.solver;
        r.number_or("dt_s", "auto", s.dt);
        r.count("n_steps", s.n_steps);
        r.number("courant_fraction", s.courant_fraction);
        s.boundary = parse_boundary(r, r.string("boundary", boundary_name(s.boundary)));
        r.count("record_every", s.record_every);
        r.boolean("current_dependent_inductance", s.current_dependent_inductance);
        if (r.has("packet")) {
            const Reader pr(text, r.at("packet"), "solver.packet");
            auto& p = s.packet;
            pr.number("center_cells", p.center_cells);
            pr.number("sigma_cells", p.sigma_cells);
            pr.number("ka", p.ka);
            pr.number("amplitude_V", p.amplitude);
            const auto dir = pr.string("direction", p.direction >= 0 ? "right" : "left");
            if (dir != "right" && dir != "left") pr.fail("direction", "expected \"right\" or \"left\"");
            p.direction = dir == "right" ? +1 : -1;
        }
    }
    if (top.has("validity")) {
        const Reader r(text, top.at("validity"), "validity");
        auto& v = cfg.validity;
        r.number("max_signal_frequency_rad_s", v.max_signal_frequency);
        r.number("beta_L_max", v.beta_L_max);
        r.number("flux_max_phi0", v.flux_max);
        r.number("frequency_fraction", v.frequency_fraction);
    }
    if (top.has("dispersion")) {
        const Reader r(text, top.at("dispersion"), "dispersion");
        if (r.has("ka_points")) {
            const auto& arr = r.at("ka_points");
            if (!arr.is_array()) r.fail("ka_points", "expected an array of numbers");
            cfg.dispersion.ka_points.clear();
            for (const auto& v : arr) {
                if (!v.is_number()) r.fail("ka_points", "expected an array of numbers");
                cfg.dispersion.ka_points.push_back(v.get<double>());
            }
        }
    }
    if (top.has("output")) {
        const Reader r(text, top.at("output"), "output");
        auto& o = cfg.output;
        o.dir = r.string("dir", o.dir);
        if (r.has("emit")) {
            const auto& arr = r.at("emit");
            if (!arr.is_array()) r.fail("emit", "expected an array of \"csv\", \"svg\", \"bin\"");
            o.emit.clear();
            for (const auto& v : arr) {
                if (!v.is_string()) r.fail("emit", "expected an array of \"csv\", \"svg\", \"bin\"");
                const auto s = v.get<std::string>();
                if (s != "csv" && s != "svg" && s != "bin") r.fail("emit", "unknown emit format '" + s + "'");
                o.emit.push_back(s);
            }
        }
        r.count("workers", o.workers);
    }
    return cfg;
}

Json to_json_value(const RunConfig& cfg) {
    Json root;
    auto& j = root["junction"];
    j["critical_current_A"] = cfg.junction.critical_current;
    if (cfg.junction.capacitance) j["capacitance_F"] = *cfg.junction.capacitance;
    if (cfg.junction.plasma_frequency) j["plasma_frequency_rad_s"] = *cfg.junction.plasma_frequency;
    j["normal_resistance_ohm"] =
        cfg.junction.normal_resistance ? Json(*cfg.junction.normal_resistance) : Json(nullptr);

    root["squid"]["loop_inductance_H"] = cfg.squid.loop_inductance;

    auto& a = root["array"];
    a["n_cells"] = cfg.array.n_cells;
    a["cell_length_m"] = cfg.array.cell_length;
    a["ground_capacitance_F"] = cfg.array.ground_capacitance;
    a["environment_impedance_ohm"] = cfg.array.environment_impedance;

    auto& p = root["pulse"];
    const auto& ps = cfg.pulse;
    p["shape"] = shape_name(ps.shape);
    p["amplitude_phi0"] = ps.amplitude;
    p["dc_offset_phi0"] = ps.dc_offset;
    if (ps.velocity) {
        p["velocity_m_s"] = *ps.velocity;
    } else {
        p["velocity_ratio"] = ps.velocity_ratio;
    }
    p["steepness_per_m"] = ps.steepness ? Json(*ps.steepness) : Json("auto");
    p["front_position_m"] = ps.front_position;
    p["broadening_per_m"] = ps.broadening_rate ? Json(*ps.broadening_rate) : Json("calibrate");
    p["broadening_target_decay"] = ps.broadening_target_decay;
    p["broadening_reference_cells"] = ps.broadening_reference_cells;

    auto& s = root["solver"];
    const auto& ss = cfg.solver;
    s["dt_s"] = ss.dt ? Json(*ss.dt) : Json("auto");
    s["n_steps"] = ss.n_steps;
    s["courant_fraction"] = ss.courant_fraction;
    s["boundary"] = boundary_name(ss.boundary);
    s["record_every"] = ss.record_every;
    s["current_dependent_inductance"] = ss.current_dependent_inductance;
    auto& pk = s["packet"];
    pk["center_cells"] = ss.packet.center_cells;
    pk["sigma_cells"] = ss.packet.sigma_cells;
    pk["ka"] = ss.packet.ka;
    pk["amplitude_V"] = ss.packet.amplitude;
    pk["direction"] = ss.packet.direction >= 0 ? "right" : "left";

    auto& v = root["validity"];
    v["max_signal_frequency_rad_s"] = cfg.validity.max_signal_frequency;
    v["beta_L_max"] = cfg.validity.beta_L_max;
    v["flux_max_phi0"] = cfg.validity.flux_max;
    v["frequency_fraction"] = cfg.validity.frequency_fraction;

    root["dispersion"]["ka_points"] = cfg.dispersion.ka_points;

    auto& o = root["output"];
    o["dir"] = cfg.output.dir;
    o["emit"] = cfg.output.emit;
    o["workers"] = cfg.output.workers;
    return root;
}

}  // namespace

std::string nearest_key(std::string_view key, const std::vector<std::string>& candidates) {
    std::string best;
    std::size_t best_d = std::numeric_limits<std::size_t>::max();
    for (const auto& c : candidates) {
        // A unit suffix left off counts as a near miss.
        const bool prefix = !key.empty() && (c.starts_with(key) || key.starts_with(c));
        const std::size_t d = prefix ? 1 : edit_distance(key, c);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

RunConfig parse_config(std::string_view text) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        raise(ErrorCode::ParseError, "line 1, column 1: configuration is empty");
    }
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::ostringstream os;
        os << "line " << line << ", column " << col << ": " << e.what();
        raise(ErrorCode::ParseError, os.str());
    }
    return from_json(text, root);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::ConfigError, "cannot read configuration file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_json(const RunConfig& config, int indent) { return to_json_value(config).dump(indent) + "\n"; }

double gradient_cap(const circuit::SquidParams& squid) {
    return circuit::effective_plasma_frequency(squid, 0.0) / (2.0 * std::numbers::pi * 10.0);
}

Setup resolve(const RunConfig& config) {
    try {
        Setup s;
        auto& j = s.squid.junction;
        j.critical_current = config.junction.critical_current;
        if (config.junction.capacitance) {
            j.capacitance = *config.junction.capacitance;
        } else if (config.junction.plasma_frequency) {
            j.capacitance = circuit::capacitance_for_plasma_frequency(j.critical_current,
                                                                      *config.junction.plasma_frequency);
        } else {
            raise(ErrorCode::ConfigError, "junction needs capacitance_F or plasma_frequency_rad_s");
        }
        j.normal_resistance = config.junction.normal_resistance;
        s.squid.loop_inductance = config.squid.loop_inductance;
        circuit::validate(s.squid);

        s.array = {config.array.n_cells, config.array.cell_length, config.array.ground_capacitance,
                   config.array.environment_impedance};
        circuit::validate(s.array);

        const auto& ps = config.pulse;
        auto& p = s.pulse;
        p.shape = ps.shape;
        p.amplitude = ps.amplitude;
        p.dc_offset = ps.dc_offset;
        p.velocity = ps.velocity ? *ps.velocity : ps.velocity_ratio * circuit::cell_velocity(s.array, s.squid, 0.0);
        p.front_position = ps.front_position;
        p.broadening_rate = 0.0;
        p.steepness = 1.0 / s.array.cell_length;
        bias::validate(p);
        // Without a black horizon there is nothing to tune: one-cell front, no broadening.
        bool horizon = true;
        if (ps.steepness) {
            p.steepness = *ps.steepness;
        } else {
            try {
                p.steepness = geometry::steepness_for_gradient(s.array, s.squid, p, gradient_cap(s.squid));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoHorizon) throw;
                horizon = false;
            }
        }
        bias::validate(p);
        if (ps.broadening_rate) {
            p.broadening_rate = *ps.broadening_rate;
        } else if (horizon) {
            try {
                p.broadening_rate = bias::calibrate_broadening(ps.broadening_target_decay,
                                                               ps.broadening_reference_cells, s.array, s.squid, p);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoHorizon) throw;
            }
        }
        bias::validate(p);

        s.limits = {config.validity.beta_L_max, config.validity.frequency_fraction, config.validity.flux_max};
        s.max_signal_frequency = config.validity.max_signal_frequency;
        return s;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        raise(ErrorCode::ConfigError, std::string("invalid configuration: ") + e.what());
    }
}

void require_key_path(std::string_view path) {
    const auto parts = split(path);
    std::string section;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) section += (i ? "." : "") + parts[i];
    const auto it = parts.size() < 2 ? schema().end() : schema().find(section);
    if (it == schema().end() || std::find(it->second.begin(), it->second.end(), parts.back()) == it->second.end()) {
        raise(ErrorCode::ConfigError, "path '" + std::string(path) + "' does not name a configuration key");
    }
}

RunConfig with_value(const RunConfig& config, std::string_view path, double value) {
    require_key_path(path);
    const auto parts = split(path);
    const std::string key = parts.back();
    Json root = to_json_value(config);
    Json* node = &root;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
    static const std::map<std::string, std::string> exclusive{
        {"velocity_m_s", "velocity_ratio"},
        {"velocity_ratio", "velocity_m_s"},
        {"capacitance_F", "plasma_frequency_rad_s"},
        {"plasma_frequency_rad_s", "capacitance_F"},
    };
    if (const auto ex = exclusive.find(key); ex != exclusive.end()) node->erase(ex->second);
    const bool integral = key == "n_cells" || key == "n_steps" || key == "record_every" || key == "workers" ||
                          key == "broadening_reference_cells";
    if (integral) {
        if (value < 0.0 || value != std::floor(value)) {
            raise(ErrorCode::ConfigError, "'" + std::string(path) + "' needs a non-negative integer");
        }
        (*node)[key] = static_cast<std::size_t>(value);
    } else {
        (*node)[key] = value;
    }
    return parse_config(root.dump());
}

}  // namespace squid_horizon::config
