#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdcoex/calibrate.hpp"
#include "qkdcoex/parallel.hpp"
#include "qkdcoex/simulate.hpp"

namespace qkdcoex {

struct CombSpec {
    bool enabled = true;
    int n_channels = 60;
    PowerDbm total_power{16.8};
    bool include_service_channels = false;
    PowerDbm service_power = PowerDbm::off();
};

enum class SweepVariable {
    length,
    power,
    channels,
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::length;
    std::vector<double> values;
};

struct TimeseriesSpec {
    double duration_s = 0.0;
    double interval_s = 1.0;
    std::uint64_t seed = 1;
};

enum class RunMode {
    point,
    sweep,
    timeseries,
};

// One scenario: a link, a comb, the physics parameter blocks, and exactly
// one execution mode (fixed point when neither sweep nor timeseries is set).
struct ScenarioConfig {
    FiberLink link;
    CombSpec comb;
    ProtocolParams protocol;
    DetectorParams detector;
    RamanParams raman;
    double leakage_extinction = 0.0;
    std::optional<SweepSpec> sweep;
    std::optional<TimeseriesSpec> timeseries;

    // Calibration inputs; only consumed by the calibrate entry point.
    std::vector<Anchor> anchors;
    std::optional<FitSpec> fit;

    RunMode mode() const;
};

WdmComb comb_from_spec(const CombSpec& spec);

// Fixed-point mode only.
CoexistenceResult run_scenario(const ScenarioConfig& config);

// One result per sweep value, input order preserved. Points are evaluated
// independently, so the parallel path is bit-identical to the serial one.
std::vector<CoexistenceResult> run_sweep(const ScenarioConfig& config,
                                         ExecPolicy policy = ExecPolicy::parallel);

struct TimeseriesSample {
    double t_s = 0.0;
    double skr_bps = 0.0;
    double qber = 0.0;
};

// Per-interval detection/error counts drawn around the deterministic
// expectations (Poisson for counts, binomial for errors), then pushed back
// through the decoy analysis. Deterministic per seed, independent of the
// thread count.
std::vector<TimeseriesSample> run_timeseries(const ScenarioConfig& config,
                                             ExecPolicy policy = ExecPolicy::parallel);

std::string format_ce_report(double skr_bps, PowerDbm p_wdm, double length_km);

}  // namespace qkdcoex
