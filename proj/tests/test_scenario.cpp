#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "qkdcoex/config.hpp"
#include "qkdcoex/csv.hpp"
#include "qkdcoex/error.hpp"
#include "qkdcoex/scenario.hpp"

using namespace qkdcoex;

namespace {

ScenarioConfig noisy_config() {
    ScenarioConfig config;
    config.raman.beta_per_km_nm = 3.0e-12;
    return config;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

std::string temp_path(const char* name) {
    return std::string("qkdcoex_test_") + name;
}

}  // namespace

TEST_CASE("empty config text yields the defaults") {
    const ScenarioConfig config = parse_config_text("{}");
    CHECK(config.link.length_km == 50.0);
    CHECK(config.comb.n_channels == 60);
    CHECK(config.comb.total_power.value == doctest::Approx(16.8));
    CHECK(config.raman.alpha_pump_db_per_km == 0.20);
    CHECK(config.raman.alpha_quantum_db_per_km == 0.33);
    CHECK(config.mode() == RunMode::point);
}

TEST_CASE("unknown keys are hard errors with a field path") {
    try {
        parse_config_text(R"({"comb": {"total_powr_dbm": 16.8}})", "cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cfg.comb.total_powr_dbm") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"sweep": {"variable": "voltage", "values": [1]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"comb": {"n_channels": 45}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
}

TEST_CASE("mode exclusivity") {
    const char* both = R"({
        "sweep": {"variable": "length", "values": [10, 20]},
        "timeseries": {"duration_s": 10, "interval_s": 1}
    })";
    CHECK_THROWS_AS(parse_config_text(both), ConfigError);
}

TEST_CASE("comb power accepts off") {
    const ScenarioConfig config = parse_config_text(R"({"comb": {"total_power_dbm": "off"}})");
    CHECK(config.comb.total_power.is_off());
}

TEST_CASE("config round trip is a fixed point") {
    const char* text = R"({
        // calibration scenario with every block populated
        "link": {"length_km": 20.0, "fixed_loss_quantum_db": 2.6},
        "comb": {"n_channels": 30, "total_power_dbm": 15.3},
        "protocol": {"mu": 0.45},
        "detector": {"efficiency": 0.22},
        "raman": {"beta_per_km_nm": 2.5e-12, "leakage_extinction": 1e-10},
        "sweep": {"variable": "power", "values": [10, 12, 14]},
        "anchors": [
            {"length_km": 50, "comb": "off", "target_skr_bps": 169e3, "target_qber": 0.034},
            {"length_km": 50, "comb": {"n_channels": 60, "total_power_dbm": 16.8},
             "target_skr_bps": 106e3}
        ],
        "fit": {"max_evals": 100, "seed": 3}
    })";
    const ScenarioConfig parsed = parse_config_text(text);
    const std::string once = serialize_config(parsed);
    const std::string twice = serialize_config(parse_config_text(once));
    CHECK(once == twice);

    const ScenarioConfig reparsed = parse_config_text(once);
    CHECK(reparsed.link.length_km == parsed.link.length_km);
    CHECK(reparsed.comb.n_channels == parsed.comb.n_channels);
    CHECK(reparsed.anchors.size() == parsed.anchors.size());
    CHECK(reparsed.fit->seed == parsed.fit->seed);
    CHECK(reparsed.raman.beta_per_km_nm == parsed.raman.beta_per_km_nm);
}

TEST_CASE("params overlay replaces only the given keys") {
    ScenarioConfig config = noisy_config();
    const double pulse_rate = config.protocol.pulse_rate_hz;
    apply_params_text(config, R"({"detector": {"efficiency": 0.31}, "raman": {"beta_per_km_nm": 9e-13}})");
    CHECK(config.detector.efficiency == 0.31);
    CHECK(config.raman.beta_per_km_nm == 9e-13);
    CHECK(config.protocol.pulse_rate_hz == pulse_rate);
    CHECK_THROWS_AS(apply_params_text(config, R"({"link": {"length_km": 1}})"), ConfigError);
}

TEST_CASE("run_scenario rejects non-point configs") {
    ScenarioConfig config = noisy_config();
    config.sweep = SweepSpec{SweepVariable::length, {10.0}};
    CHECK_THROWS_AS(run_scenario(config), std::domain_error);
}

TEST_CASE("length sweep declines, power sweep drives qber up") {
    ScenarioConfig config = noisy_config();
    config.comb.total_power = PowerDbm{15.3};
    config.sweep = SweepSpec{SweepVariable::length, {20.0, 50.0, 70.0}};
    const auto by_length = run_sweep(config);
    REQUIRE(by_length.size() == 3);
    CHECK(by_length[0].length_km == 20.0);
    CHECK(by_length[2].length_km == 70.0);
    CHECK(by_length[0].skr_bps > by_length[1].skr_bps);
    CHECK(by_length[1].skr_bps > by_length[2].skr_bps);

    config.sweep = SweepSpec{SweepVariable::power, {0.0, 8.0, 16.0, 24.0}};
    const auto by_power = run_sweep(config);
    for (std::size_t i = 1; i < by_power.size(); ++i)
        CHECK(by_power[i].qber >= by_power[i - 1].qber - 1e-12);
}

TEST_CASE("channel sweep confirms aggregate-power invariance") {
    ScenarioConfig config = noisy_config();
    config.sweep = SweepSpec{SweepVariable::channels, {30.0, 60.0}};
    const auto results = run_sweep(config);
    REQUIRE(results.size() == 2);
    CHECK(same_bits(results[0].skr_bps, results[1].skr_bps));
    CHECK(same_bits(results[0].qber, results[1].qber));
}

TEST_CASE("single-value sweep equals run_scenario") {
    ScenarioConfig config = noisy_config();
    config.sweep = SweepSpec{SweepVariable::length, {37.5}};
    const auto swept = run_sweep(config);
    ScenarioConfig point = config;
    point.sweep.reset();
    point.link.length_km = 37.5;
    const CoexistenceResult direct = run_scenario(point);
    REQUIRE(swept.size() == 1);
    CHECK(same_bits(swept[0].skr_bps, direct.skr_bps));
    CHECK(same_bits(swept[0].qber, direct.qber));
    CHECK(same_bits(swept[0].ce, direct.ce));
}

TEST_CASE("sweep is deterministic across policies and rejects empty lists") {
    ScenarioConfig config = noisy_config();
    config.sweep = SweepSpec{SweepVariable::length, {}};
    for (double l = 2.0; l <= 120.0; l += 0.5) config.sweep->values.push_back(l);

    const auto serial = run_sweep(config, ExecPolicy::serial);
    const auto parallel = run_sweep(config, ExecPolicy::parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(same_bits(serial[i].skr_bps, parallel[i].skr_bps));
        CHECK(same_bits(serial[i].qber, parallel[i].qber));
        CHECK(same_bits(serial[i].ce, parallel[i].ce));
        CHECK(serial[i].length_km == config.sweep->values[i]);
    }

    config.sweep->values.clear();
    CHECK_THROWS_AS(run_sweep(config), std::domain_error);
}

TEST_CASE("a bad sweep point surfaces as an exception under both policies") {
    ScenarioConfig config = noisy_config();
    config.sweep = SweepSpec{SweepVariable::length, {10.0, -5.0, 30.0}};
    CHECK_THROWS_AS(run_sweep(config, ExecPolicy::serial), std::domain_error);
    CHECK_THROWS_AS(run_sweep(config, ExecPolicy::parallel), std::domain_error);
}

TEST_CASE("timeseries behaviour") {
    ScenarioConfig config = noisy_config();

    SUBCASE("zero duration gives an empty series") {
        config.timeseries = TimeseriesSpec{0.0, 1.0, 9};
        CHECK(run_timeseries(config).empty());
    }

    SUBCASE("non-positive interval is rejected") {
        config.timeseries = TimeseriesSpec{10.0, 0.0, 9};
        CHECK_THROWS_AS(run_timeseries(config), std::domain_error);
    }

    SUBCASE("same seed reproduces, different seed diverges, policies agree") {
        config.timeseries = TimeseriesSpec{200.0, 1.0, 1234};
        const auto a = run_timeseries(config);
        const auto b = run_timeseries(config);
        REQUIRE(a.size() == 200);
        bool identical = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            identical = identical && same_bits(a[i].skr_bps, b[i].skr_bps) &&
                        same_bits(a[i].qber, b[i].qber);
        CHECK(identical);

        const auto serial = run_timeseries(config, ExecPolicy::serial);
        bool policy_identical = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            policy_identical = policy_identical && same_bits(a[i].skr_bps, serial[i].skr_bps);
        CHECK(policy_identical);

        config.timeseries->seed = 4321;
        const auto c = run_timeseries(config);
        bool differs = false;
        for (std::size_t i = 0; i < a.size(); ++i)
            differs = differs || !same_bits(a[i].skr_bps, c[i].skr_bps);
        CHECK(differs);
    }

    SUBCASE("sample mean tracks the deterministic rate") {
        config.timeseries = TimeseriesSpec{1000.0, 1.0, 77};
        const auto samples = run_timeseries(config);
        REQUIRE(samples.size() == 1000);

        ScenarioConfig point = config;
        point.timeseries.reset();
        const CoexistenceResult expected = run_scenario(point);

        double mean = 0.0;
        for (const TimeseriesSample& s : samples) mean += s.skr_bps;
        mean /= double(samples.size());
        double var = 0.0;
        for (const TimeseriesSample& s : samples)
            var += (s.skr_bps - mean) * (s.skr_bps - mean);
        var /= double(samples.size() - 1);
        const double se = std::sqrt(var / double(samples.size()));
        CHECK(std::fabs(mean - expected.skr_bps) < 3.0 * se);
    }
}

TEST_CASE("csv emission and round trip") {
    ScenarioConfig config = noisy_config();
    config.sweep = SweepSpec{SweepVariable::length, {20.0, 50.0, 70.0}};
    const auto results = run_sweep(config);
    const std::string csv = format_csv(results);

    // 3 rows -> 4 lines
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.rfind(kCsvHeader, 0) == 0);

    const auto rows = parse_result_csv(csv);
    REQUIRE(rows.size() == results.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].length_km == doctest::Approx(results[i].length_km).epsilon(1e-5));
        CHECK(rows[i].skr_bps == doctest::Approx(results[i].skr_bps).epsilon(1e-5));
        CHECK(rows[i].qber == doctest::Approx(results[i].qber).epsilon(1e-5));
        CHECK(rows[i].ce == doctest::Approx(results[i].ce).epsilon(1e-5));
        CHECK(rows[i].n_channels == results[i].n_channels);
        // every emitted row's ce is the ce of its own columns at 6 digits
        const double recomputed =
            compute_ce(rows[i].skr_bps, PowerDbm{rows[i].p_wdm_dbm}, rows[i].length_km);
        CHECK(rows[i].ce == doctest::Approx(recomputed).epsilon(1e-4));
        CHECK(rows[i].flags == results[i].flags.to_string());
    }

    const std::string path = temp_path("roundtrip.csv");
    emit_csv(results, path);
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(contents == csv);
    std::remove(path.c_str());

    CHECK_THROWS(emit_csv(results, "/nonexistent-dir/out.csv"));
    CHECK_THROWS_AS(format_csv({}), std::domain_error);
}

TEST_CASE("dark comb rows carry -inf power and zero ce") {
    ScenarioConfig config = noisy_config();
    config.comb.enabled = false;
    const CoexistenceResult r = run_scenario(config);
    const std::string csv = format_csv({r});
    CHECK(csv.find("-inf") != std::string::npos);
    const auto rows = parse_result_csv(csv);
    CHECK(rows[0].ce == 0.0);
    CHECK(rows[0].n_channels == 0);
}

TEST_CASE("ce report quotes the published baseline") {
    const std::string report = format_ce_report(106e3, PowerDbm{16.8}, 50.0);
    CHECK(report.find("9.3") != std::string::npos);
    CHECK(report.find("Wang") != std::string::npos);
    CHECK(report.find("253.674") != std::string::npos);
}
