#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qkdcoex/config.hpp"
#include "qkdcoex/csv.hpp"
#include "qkdcoex/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

using namespace qkdcoex;

void print_result(const CoexistenceResult& r) {
    std::printf("length        : %.6g km\n", r.length_km);
    if (r.p_wdm.is_off())
        std::printf("p_wdm         : off\n");
    else
        std::printf("p_wdm         : %.6g dBm (%.6g mW, %d channels)\n", r.p_wdm.value,
                    dbm_to_mw(r.p_wdm).value, r.n_channels);
    std::printf("loss          : %.6g dB classical / %.6g dB quantum\n", r.loss_classical_db,
                r.loss_quantum_db);
    std::printf("forward raman : %.6g mW (%.6g photons/s in filter)\n",
                r.noise.forward_raman.value, r.noise.photon_rate_hz);
    std::printf("skr           : %.6g bit/s (%s)\n", r.skr_bps, r.secure ? "secure" : "no key");
    std::printf("qber          : %.4g %%\n", r.qber * 100.0);
    std::printf("ce            : %.6g Mb/s*mW*km\n", r.ce);
    if (r.flags.any()) std::printf("flags         : %s\n", r.flags.to_string().c_str());
}

ScenarioConfig load_inputs(const std::string& config_path, const std::string& params_path) {
    ScenarioConfig config = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
    if (!params_path.empty()) apply_params_file(config, params_path);
    return config;
}

int run_simulate(const std::string& config_path, const std::string& params_path,
                 const std::string& out_path) {
    ScenarioConfig config = load_inputs(config_path, params_path);
    if (config.mode() != RunMode::point)
        throw ConfigError(config_path, "simulate needs a fixed-point config (no sweep/timeseries)");
    const CoexistenceResult result = run_scenario(config);
    print_result(result);
    if (!out_path.empty()) emit_csv({result}, out_path);
    return kExitOk;
}

int run_sweep_cmd(const std::string& config_path, const std::string& params_path,
                  const std::string& out_path, bool serial) {
    const ScenarioConfig config = load_inputs(config_path, params_path);
    if (config.mode() != RunMode::sweep)
        throw ConfigError(config_path, "sweep block required");
    const auto results = run_sweep(config, serial ? ExecPolicy::serial : ExecPolicy::parallel);
    const std::string csv = format_csv(results);
    if (out_path.empty())
        std::fputs(csv.c_str(), stdout);
    else
        emit_csv(results, out_path);
    return kExitOk;
}

int run_timeseries_cmd(const std::string& config_path, const std::string& params_path,
                       const std::string& out_path, std::optional<std::uint64_t> seed,
                       bool serial) {
    ScenarioConfig config = load_inputs(config_path, params_path);
    if (!config.timeseries) throw ConfigError(config_path, "timeseries block required");
    if (seed) config.timeseries->seed = *seed;
    const auto samples =
        run_timeseries(config, serial ? ExecPolicy::serial : ExecPolicy::parallel);
    const std::string csv = format_timeseries_csv(samples);
    if (out_path.empty())
        std::fputs(csv.c_str(), stdout);
    else
        emit_timeseries_csv(samples, out_path);
    return kExitOk;
}

int run_calibrate(const std::string& config_path, const std::string& params_out,
                  const std::string& report_out, std::optional<std::uint64_t> seed) {
    const ScenarioConfig config = load_config(config_path);
    if (config.anchors.empty()) throw ConfigError(config_path, "anchors block required");
    FitSpec spec = config.fit.value_or(default_fit_spec());
    if (seed) spec.seed = *seed;

    const ParamSet start{config.protocol, config.detector, config.raman};
    const FitReport report = fit(spec, config.link, config.anchors, start);
    const std::string text = format_fit_report(report, config.link, config.anchors);
    std::fputs(text.c_str(), stdout);

    if (!report_out.empty()) {
        std::ofstream out(report_out);
        if (!out) throw std::runtime_error("cannot open report file: " + report_out);
        out << text;
    }
    if (!params_out.empty()) {
        std::ofstream out(params_out);
        if (!out) throw std::runtime_error("cannot open params file: " + params_out);
        out << serialize_params(report.params, config.anchors);
    }
    return kExitOk;
}

int run_ce(double skr_bps, double p_wdm_dbm, double length_km) {
    std::fputs(format_ce_report(skr_bps, PowerDbm{p_wdm_dbm}, length_km).c_str(), stdout);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QKD / DWDM co-propagation link simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string params_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    bool serial = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "scenario config file");
        if (needs_config) opt->required();
        cmd->add_option("--params", params_path, "fitted parameter file to overlay");
        cmd->add_option("--out", out_path, "output CSV path");
        cmd->add_option("--seed", seed, "seed override");
        cmd->add_flag("--serial", serial, "disable parallel evaluation");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run one fixed configuration");
    add_common(simulate, false);

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep, true);

    CLI::App* timeseries = app.add_subcommand("timeseries", "emulate a timed measurement");
    add_common(timeseries, true);

    CLI::App* calibrate = app.add_subcommand("calibrate", "fit free parameters to anchors");
    calibrate->add_option("--config", config_path, "config with anchors (and optional fit block)")
        ->required();
    calibrate->add_option("--params", params_path, "output path for fitted parameters");
    calibrate->add_option("--out", out_path, "output path for the fit report");
    calibrate->add_option("--seed", seed, "seed override");

    double skr_bps = 0.0;
    double p_wdm_dbm = 0.0;
    double length_km = 0.0;
    CLI::App* ce = app.add_subcommand("ce", "co-propagation efficiency calculator");
    ce->add_option("--skr-bps", skr_bps, "secure key rate in bit/s")->required();
    ce->add_option("--p-wdm-dbm", p_wdm_dbm, "aggregate classical power in dBm")->required();
    ce->add_option("--length-km", length_km, "link length in km")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (simulate->parsed()) return run_simulate(config_path, params_path, out_path);
        if (sweep->parsed()) return run_sweep_cmd(config_path, params_path, out_path, serial);
        if (timeseries->parsed())
            return run_timeseries_cmd(config_path, params_path, out_path, seed, serial);
        if (calibrate->parsed()) return run_calibrate(config_path, params_path, out_path, seed);
        if (ce->parsed()) return run_ce(skr_bps, p_wdm_dbm, length_km);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericError;
    }
    return kExitOk;
}
