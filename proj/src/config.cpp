#include "qkdcoex/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qkdcoex/error.hpp"

namespace qkdcoex {

namespace {

using nlohmann::json;

// Read-only view of one JSON object with its field path; every block parser
// declares which keys it understands and anything else is rejected.
struct Cursor {
    const json& node;
    std::string path;

    Cursor child(const char* key) const { return {node.at(key), path + "." + key}; }

    bool has(const char* key) const { return node.contains(key); }

    void expect_object() const {
        if (!node.is_object()) throw ConfigError(path, "expected an object");
    }

    void reject_unknown(std::initializer_list<const char*> allowed) const {
        for (const auto& item : node.items()) {
            bool known = false;
            for (const char* key : allowed)
                if (item.key() == key) {
                    known = true;
                    break;
                }
            if (!known) throw ConfigError(path + "." + item.key(), "unknown key");
        }
    }

    double number(const char* key, double fallback) const {
        if (!has(key)) return fallback;
        const json& v = node.at(key);
        if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
        return v.get<double>();
    }

    bool boolean(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = node.at(key);
        if (!v.is_boolean()) throw ConfigError(path + "." + key, "expected a boolean");
        return v.get<bool>();
    }

    int integer(const char* key, int fallback) const {
        if (!has(key)) return fallback;
        const json& v = node.at(key);
        if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
        return v.get<int>();
    }

    std::uint64_t uinteger(const char* key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const json& v = node.at(key);
        if (!v.is_number_unsigned() && !v.is_number_integer())
            throw ConfigError(path + "." + key, "expected a non-negative integer");
        if (v.is_number_integer() && v.get<std::int64_t>() < 0)
            throw ConfigError(path + "." + key, "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string text(const char* key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const json& v = node.at(key);
        if (!v.is_string()) throw ConfigError(path + "." + key, "expected a string");
        return v.get<std::string>();
    }

    // A power that is either a number in dBm or the string "off".
    PowerDbm power(const char* key, PowerDbm fallback) const {
        if (!has(key)) return fallback;
        const json& v = node.at(key);
        if (v.is_string()) {
            if (v.get<std::string>() == "off") return PowerDbm::off();
            throw ConfigError(path + "." + key, "expected a number in dBm or \"off\"");
        }
        if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number in dBm or \"off\"");
        return PowerDbm{v.get<double>()};
    }
};

void parse_link(const Cursor& c, FiberLink& link) {
    c.expect_object();
    c.reject_unknown({"length_km", "attenuation_table", "fixed_loss_classical_db",
                      "fixed_loss_quantum_db"});
    link.length_km = c.number("length_km", link.length_km);
    link.fixed_loss_classical_db = c.number("fixed_loss_classical_db", link.fixed_loss_classical_db);
    link.fixed_loss_quantum_db = c.number("fixed_loss_quantum_db", link.fixed_loss_quantum_db);
    if (c.has("attenuation_table")) {
        const json& table = c.node.at("attenuation_table");
        if (!table.is_array()) throw ConfigError(c.path + ".attenuation_table", "expected an array");
        link.attenuation_table.clear();
        for (std::size_t i = 0; i < table.size(); ++i) {
            Cursor knot{table[i], c.path + ".attenuation_table[" + std::to_string(i) + "]"};
            knot.expect_object();
            knot.reject_unknown({"wavelength_nm", "alpha_db_per_km"});
            if (!knot.has("wavelength_nm") || !knot.has("alpha_db_per_km"))
                throw ConfigError(knot.path, "knot needs wavelength_nm and alpha_db_per_km");
            link.attenuation_table.push_back(
                {knot.number("wavelength_nm", 0.0), knot.number("alpha_db_per_km", 0.0)});
        }
    }
}

void parse_comb(const Cursor& c, CombSpec& comb) {
    c.expect_object();
    c.reject_unknown({"enabled", "n_channels", "total_power_dbm", "include_service_channels",
                      "service_power_dbm"});
    comb.enabled = c.boolean("enabled", comb.enabled);
    comb.n_channels = c.integer("n_channels", comb.n_channels);
    comb.total_power = c.power("total_power_dbm", comb.total_power);
    comb.include_service_channels = c.boolean("include_service_channels", comb.include_service_channels);
    comb.service_power = c.power("service_power_dbm", comb.service_power);
}

void parse_protocol(const Cursor& c, ProtocolParams& p) {
    c.expect_object();
    c.reject_unknown({"mu", "nu", "pulse_rate_hz", "basis_bias", "f_ec"});
    p.mu = c.number("mu", p.mu);
    p.nu = c.number("nu", p.nu);
    p.pulse_rate_hz = c.number("pulse_rate_hz", p.pulse_rate_hz);
    p.basis_bias = c.number("basis_bias", p.basis_bias);
    p.f_ec = c.number("f_ec", p.f_ec);
}

void parse_detector(const Cursor& c, DetectorParams& d) {
    c.expect_object();
    c.reject_unknown({"efficiency", "dark_prob", "misalignment_error", "gate_width_s"});
    d.efficiency = c.number("efficiency", d.efficiency);
    d.dark_prob = c.number("dark_prob", d.dark_prob);
    d.misalignment_error = c.number("misalignment_error", d.misalignment_error);
    d.gate_width_s = c.number("gate_width_s", d.gate_width_s);
}

void parse_raman(const Cursor& c, RamanParams& r, double& leakage_extinction) {
    c.expect_object();
    c.reject_unknown({"beta_per_km_nm", "filter_bandwidth_nm", "alpha_pump_db_per_km",
                      "alpha_quantum_db_per_km", "leakage_extinction"});
    r.beta_per_km_nm = c.number("beta_per_km_nm", r.beta_per_km_nm);
    r.filter_bandwidth_nm = c.number("filter_bandwidth_nm", r.filter_bandwidth_nm);
    r.alpha_pump_db_per_km = c.number("alpha_pump_db_per_km", r.alpha_pump_db_per_km);
    r.alpha_quantum_db_per_km = c.number("alpha_quantum_db_per_km", r.alpha_quantum_db_per_km);
    leakage_extinction = c.number("leakage_extinction", leakage_extinction);
}

SweepSpec parse_sweep(const Cursor& c) {
    c.expect_object();
    c.reject_unknown({"variable", "values"});
    SweepSpec sweep;
    const std::string variable = c.text("variable", "length");
    if (variable == "length")
        sweep.variable = SweepVariable::length;
    else if (variable == "power")
        sweep.variable = SweepVariable::power;
    else if (variable == "channels")
        sweep.variable = SweepVariable::channels;
    else
        throw ConfigError(c.path + ".variable", "expected one of length|power|channels");
    if (!c.has("values")) throw ConfigError(c.path + ".values", "missing");
    const json& values = c.node.at("values");
    if (!values.is_array()) throw ConfigError(c.path + ".values", "expected an array of numbers");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i].is_number())
            throw ConfigError(c.path + ".values[" + std::to_string(i) + "]", "expected a number");
        sweep.values.push_back(values[i].get<double>());
    }
    return sweep;
}

TimeseriesSpec parse_timeseries(const Cursor& c) {
    c.expect_object();
    c.reject_unknown({"duration_s", "interval_s", "seed"});
    TimeseriesSpec spec;
    spec.duration_s = c.number("duration_s", spec.duration_s);
    spec.interval_s = c.number("interval_s", spec.interval_s);
    spec.seed = c.uinteger("seed", spec.seed);
    return spec;
}

std::vector<Anchor> parse_anchors(const Cursor& c) {
    if (!c.node.is_array()) throw ConfigError(c.path, "expected an array");
    std::vector<Anchor> anchors;
    for (std::size_t i = 0; i < c.node.size(); ++i) {
        Cursor a{c.node[i], c.path + "[" + std::to_string(i) + "]"};
        a.expect_object();
        a.reject_unknown({"length_km", "comb", "target_skr_bps", "target_qber", "weight"});
        Anchor anchor;
        anchor.length_km = a.number("length_km", anchor.length_km);
        if (a.has("comb")) {
            const json& comb = a.node.at("comb");
            if (comb.is_string() && comb.get<std::string>() == "off") {
                anchor.comb.off = true;
            } else if (comb.is_object()) {
                Cursor cc = a.child("comb");
                cc.reject_unknown({"n_channels", "total_power_dbm"});
                anchor.comb.n_channels = cc.integer("n_channels", anchor.comb.n_channels);
                anchor.comb.total_power_dbm = cc.number("total_power_dbm", anchor.comb.total_power_dbm);
            } else {
                throw ConfigError(a.path + ".comb", "expected \"off\" or an object");
            }
        }
        if (a.has("target_skr_bps")) anchor.target_skr_bps = a.number("target_skr_bps", 0.0);
        if (a.has("target_qber")) anchor.target_qber = a.number("target_qber", 0.0);
        anchor.weight = a.number("weight", anchor.weight);
        if (!anchor.target_skr_bps && !anchor.target_qber)
            throw ConfigError(a.path, "anchor needs target_skr_bps and/or target_qber");
        if (anchor.target_skr_bps && !(*anchor.target_skr_bps > 0.0))
            throw ConfigError(a.path + ".target_skr_bps", "must be positive");
        if (anchor.target_qber && !(*anchor.target_qber > 0.0 && *anchor.target_qber < 1.0))
            throw ConfigError(a.path + ".target_qber", "must lie in (0, 1)");
        if (!(anchor.weight > 0.0)) throw ConfigError(a.path + ".weight", "must be positive");
        if (!(anchor.length_km >= 0.0)) throw ConfigError(a.path + ".length_km", "must be non-negative");
        if (!anchor.comb.off && anchor.comb.n_channels != 30 && anchor.comb.n_channels != 60)
            throw ConfigError(a.path + ".comb.n_channels", "must be 30 or 60");
        anchors.push_back(anchor);
    }
    return anchors;
}

FitSpec parse_fit(const Cursor& c) {
    c.expect_object();
    c.reject_unknown({"free", "tolerance", "max_evals", "seed", "restarts"});
    FitSpec spec;
    spec.free_params.clear();
    if (c.has("free")) {
        const json& free = c.node.at("free");
        if (!free.is_array()) throw ConfigError(c.path + ".free", "expected an array");
        for (std::size_t i = 0; i < free.size(); ++i) {
            Cursor f{free[i], c.path + ".free[" + std::to_string(i) + "]"};
            f.expect_object();
            f.reject_unknown({"name", "lo", "hi", "log_scale"});
            FreeParam fp;
            fp.name = f.text("name", "");
            if (fp.name.empty()) throw ConfigError(f.path + ".name", "missing");
            if (!f.has("lo") || !f.has("hi")) throw ConfigError(f.path, "needs lo and hi bounds");
            fp.lo = f.number("lo", 0.0);
            fp.hi = f.number("hi", 0.0);
            fp.log_scale = f.boolean("log_scale", false);
            spec.free_params.push_back(fp);
        }
    }
    if (spec.free_params.empty()) spec.free_params = default_fit_spec().free_params;
    spec.tolerance = c.number("tolerance", spec.tolerance);
    spec.max_evals = c.integer("max_evals", spec.max_evals);
    spec.seed = c.uinteger("seed", spec.seed);
    spec.restarts = c.integer("restarts", spec.restarts);
    return spec;
}

void validate_parsed(const ScenarioConfig& config, const std::string& source) {
    try {
        validate_link(config.link);
    } catch (const std::domain_error& e) {
        throw ConfigError(source + ".link", e.what());
    }
    try {
        validate_protocol(config.protocol);
        validate_detector(config.detector);
        validate_raman(config.raman);
    } catch (const std::domain_error& e) {
        throw ConfigError(source, e.what());
    }
    if (config.comb.n_channels != 30 && config.comb.n_channels != 60)
        throw ConfigError(source + ".comb.n_channels", "must be 30 or 60");
    if (!(config.leakage_extinction >= 0.0))
        throw ConfigError(source + ".raman.leakage_extinction", "must be non-negative");
    if (config.sweep && config.timeseries)
        throw ConfigError(source, "sweep and timeseries modes are mutually exclusive");
}

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(source, e.what());
    }
}

json power_to_json(PowerDbm p) {
    if (p.is_off()) return "off";
    return p.value;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& source) {
    const json root = parse_json(text, source);
    Cursor c{root, source};
    c.expect_object();
    c.reject_unknown({"link", "comb", "protocol", "detector", "raman", "sweep", "timeseries",
                      "anchors", "fit"});

    ScenarioConfig config;
    if (c.has("link")) parse_link(c.child("link"), config.link);

    // Raman pump/quantum attenuations track the link table unless set
    // explicitly in the raman block.
    try {
        config.raman.alpha_pump_db_per_km = attenuation_at(config.link, kClassicalRefWavelengthNm);
        config.raman.alpha_quantum_db_per_km = attenuation_at(config.link, kQuantumWavelengthNm);
    } catch (const std::domain_error& e) {
        throw ConfigError(source + ".link.attenuation_table", e.what());
    }

    if (c.has("comb")) parse_comb(c.child("comb"), config.comb);
    if (c.has("protocol")) parse_protocol(c.child("protocol"), config.protocol);
    if (c.has("detector")) parse_detector(c.child("detector"), config.detector);
    if (c.has("raman")) parse_raman(c.child("raman"), config.raman, config.leakage_extinction);
    if (c.has("sweep")) config.sweep = parse_sweep(c.child("sweep"));
    if (c.has("timeseries")) config.timeseries = parse_timeseries(c.child("timeseries"));
    if (c.has("anchors")) config.anchors = parse_anchors(c.child("anchors"));
    if (c.has("fit")) config.fit = parse_fit(c.child("fit"));

    validate_parsed(config, source);
    return config;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

std::string serialize_config(const ScenarioConfig& config) {
    json root;
    json link;
    link["length_km"] = config.link.length_km;
    link["fixed_loss_classical_db"] = config.link.fixed_loss_classical_db;
    link["fixed_loss_quantum_db"] = config.link.fixed_loss_quantum_db;
    json table = json::array();
    for (const AttenuationKnot& knot : config.link.attenuation_table)
        table.push_back({{"wavelength_nm", knot.wavelength_nm},
                         {"alpha_db_per_km", knot.alpha_db_per_km}});
    link["attenuation_table"] = table;
    root["link"] = link;

    root["comb"] = {{"enabled", config.comb.enabled},
                    {"n_channels", config.comb.n_channels},
                    {"total_power_dbm", power_to_json(config.comb.total_power)},
                    {"include_service_channels", config.comb.include_service_channels},
                    {"service_power_dbm", power_to_json(config.comb.service_power)}};
    root["protocol"] = {{"mu", config.protocol.mu},
                        {"nu", config.protocol.nu},
                        {"pulse_rate_hz", config.protocol.pulse_rate_hz},
                        {"basis_bias", config.protocol.basis_bias},
                        {"f_ec", config.protocol.f_ec}};
    root["detector"] = {{"efficiency", config.detector.efficiency},
                        {"dark_prob", config.detector.dark_prob},
                        {"misalignment_error", config.detector.misalignment_error},
                        {"gate_width_s", config.detector.gate_width_s}};
    root["raman"] = {{"beta_per_km_nm", config.raman.beta_per_km_nm},
                     {"filter_bandwidth_nm", config.raman.filter_bandwidth_nm},
                     {"alpha_pump_db_per_km", config.raman.alpha_pump_db_per_km},
                     {"alpha_quantum_db_per_km", config.raman.alpha_quantum_db_per_km},
                     {"leakage_extinction", config.leakage_extinction}};

    if (config.sweep) {
        const char* variable = config.sweep->variable == SweepVariable::length   ? "length"
                               : config.sweep->variable == SweepVariable::power ? "power"
                                                                                : "channels";
        root["sweep"] = {{"variable", variable}, {"values", config.sweep->values}};
    }
    if (config.timeseries)
        root["timeseries"] = {{"duration_s", config.timeseries->duration_s},
                              {"interval_s", config.timeseries->interval_s},
                              {"seed", config.timeseries->seed}};
    if (!config.anchors.empty()) {
        json anchors = json::array();
        for (const Anchor& anchor : config.anchors) {
            json a;
            a["length_km"] = anchor.length_km;
            if (anchor.comb.off)
                a["comb"] = "off";
            else
                a["comb"] = {{"n_channels", anchor.comb.n_channels},
                             {"total_power_dbm", anchor.comb.total_power_dbm}};
            if (anchor.target_skr_bps) a["target_skr_bps"] = *anchor.target_skr_bps;
            if (anchor.target_qber) a["target_qber"] = *anchor.target_qber;
            a["weight"] = anchor.weight;
            anchors.push_back(a);
        }
        root["anchors"] = anchors;
    }
    if (config.fit) {
        json free = json::array();
        for (const FreeParam& fp : config.fit->free_params)
            free.push_back({{"name", fp.name}, {"lo", fp.lo}, {"hi", fp.hi},
                            {"log_scale", fp.log_scale}});
        root["fit"] = {{"free", free},
                       {"tolerance", config.fit->tolerance},
                       {"max_evals", config.fit->max_evals},
                       {"seed", config.fit->seed},
                       {"restarts", config.fit->restarts}};
    }
    return root.dump(2) + "\n";
}

void apply_params_text(ScenarioConfig& config, const std::string& text, const std::string& source) {
    const json root = parse_json(text, source);
    Cursor c{root, source};
    c.expect_object();
    c.reject_unknown({"protocol", "detector", "raman"});
    if (c.has("protocol")) parse_protocol(c.child("protocol"), config.protocol);
    if (c.has("detector")) parse_detector(c.child("detector"), config.detector);
    if (c.has("raman")) parse_raman(c.child("raman"), config.raman, config.leakage_extinction);
    validate_parsed(config, source);
}

void apply_params_file(ScenarioConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open params file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    apply_params_text(config, buffer.str(), path);
}

std::string serialize_params(const ParamSet& params, const std::vector<Anchor>& anchors) {
    std::string out = "// fitted parameters\n";
    if (!anchors.empty()) {
        out += "// calibrated against:\n";
        for (const Anchor& anchor : anchors) {
            out += "//   " + describe_anchor(anchor);
            char buf[96];
            if (anchor.target_skr_bps) {
                std::snprintf(buf, sizeof(buf), " skr=%g", *anchor.target_skr_bps);
                out += buf;
            }
            if (anchor.target_qber) {
                std::snprintf(buf, sizeof(buf), " qber=%g", *anchor.target_qber);
                out += buf;
            }
            out += "\n";
        }
    }
    json root;
    root["protocol"] = {{"mu", params.protocol.mu},
                        {"nu", params.protocol.nu},
                        {"pulse_rate_hz", params.protocol.pulse_rate_hz},
                        {"basis_bias", params.protocol.basis_bias},
                        {"f_ec", params.protocol.f_ec}};
    root["detector"] = {{"efficiency", params.detector.efficiency},
                        {"dark_prob", params.detector.dark_prob},
                        {"misalignment_error", params.detector.misalignment_error},
                        {"gate_width_s", params.detector.gate_width_s}};
    root["raman"] = {{"beta_per_km_nm", params.raman.beta_per_km_nm},
                     {"filter_bandwidth_nm", params.raman.filter_bandwidth_nm},
                     {"alpha_pump_db_per_km", params.raman.alpha_pump_db_per_km},
                     {"alpha_quantum_db_per_km", params.raman.alpha_quantum_db_per_km}};
    return out + root.dump(2) + "\n";
}

}  // namespace qkdcoex
