#include "qkdcoex/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace qkdcoex {

RunMode ScenarioConfig::mode() const {
    if (sweep && timeseries)
        throw std::domain_error("scenario: sweep and timeseries modes are mutually exclusive");
    if (sweep) return RunMode::sweep;
    if (timeseries) return RunMode::timeseries;
    return RunMode::point;
}

WdmComb comb_from_spec(const CombSpec& spec) {
    WdmComb comb = build_reference_comb(spec.n_channels,
                                    spec.enabled ? spec.total_power : PowerDbm::off());
    comb.include_service_in_aggregate = spec.include_service_channels;
    for (WdmChannel& ch : comb.service_channels) ch.power = spec.service_power;
    return comb;
}

CoexistenceResult run_scenario(const ScenarioConfig& config) {
    if (config.mode() != RunMode::point)
        throw std::domain_error("run_scenario: config is not in fixed-point mode");
    return simulate_point(config.link, comb_from_spec(config.comb), config.protocol,
                          config.detector, config.raman, config.leakage_extinction);
}

std::vector<CoexistenceResult> run_sweep(const ScenarioConfig& config, ExecPolicy policy) {
    if (config.mode() != RunMode::sweep)
        throw std::domain_error("run_sweep: config is not in sweep mode");
    const SweepSpec& sweep = *config.sweep;
    if (sweep.values.empty())
        throw std::domain_error("run_sweep: empty sweep value list");

    // Materialize the per-point configs up front; each point is then a pure
    // function evaluation, so order and thread count cannot matter.
    std::vector<ScenarioConfig> points(sweep.values.size());
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        ScenarioConfig point = config;
        point.sweep.reset();
        const double v = sweep.values[i];
        switch (sweep.variable) {
            case SweepVariable::length:
                point.link.length_km = v;
                break;
            case SweepVariable::power:
                point.comb.total_power = PowerDbm{v};
                break;
            case SweepVariable::channels:
                point.comb.n_channels = int(std::lround(v));
                break;
        }
        points[i] = std::move(point);
    }

    std::vector<CoexistenceResult> results(points.size());
    for_each_index(points.size(), policy,
                   [&](std::size_t i) { results[i] = run_scenario(points[i]); });
    return results;
}

namespace {

// One emulated accumulation interval: detection and error counts for both
// intensities drawn around their expectations, pushed back through the
// decoy analysis. RNG is derived from (seed, interval) so any thread count
// reproduces the same series.
TimeseriesSample sample_interval(const CoexistenceResult& expected, const ScenarioConfig& config,
                                 std::uint64_t seed, std::size_t index, double interval_s) {
    std::mt19937_64 rng(mix_seed(seed, index));
    const double sift = config.protocol.basis_bias * config.protocol.basis_bias;
    const double sifted_pulses = config.protocol.pulse_rate_hz * interval_s * sift;

    auto sample_gain_error = [&](double gain, double qber, double& gain_hat, double& qber_hat) {
        const double expected_counts = gain * sifted_pulses;
        std::poisson_distribution<long long> detections(expected_counts);
        const long long m = detections(rng);
        if (m <= 0) {
            gain_hat = 0.0;
            qber_hat = 0.5;
            return;
        }
        std::binomial_distribution<long long> errors(m, qber);
        const long long e = errors(rng);
        gain_hat = double(m) / sifted_pulses;
        qber_hat = double(e) / double(m);
    };

    ChannelStats observed = expected.stats;
    sample_gain_error(expected.stats.q_mu, expected.stats.e_mu, observed.q_mu, observed.e_mu);
    sample_gain_error(expected.stats.q_nu, expected.stats.e_nu, observed.q_nu, observed.e_nu);
    observed.q_mu = std::min(observed.q_mu, 1.0);
    observed.q_nu = std::min(observed.q_nu, 1.0);

    const DecoyBounds bounds = decoy_bounds(observed, config.protocol);
    const KeyRateResult key = secure_key_rate(observed, bounds, config.protocol);
    return {double(index) * interval_s, key.skr_bps, observed.e_mu};
}

}  // namespace

std::vector<TimeseriesSample> run_timeseries(const ScenarioConfig& config, ExecPolicy policy) {
    if (config.mode() != RunMode::timeseries)
        throw std::domain_error("run_timeseries: config is not in timeseries mode");
    const TimeseriesSpec& spec = *config.timeseries;
    if (!(spec.interval_s > 0.0))
        throw std::domain_error("run_timeseries: interval must be positive");
    if (!(spec.duration_s >= 0.0))
        throw std::domain_error("run_timeseries: duration must be non-negative");

    ScenarioConfig point = config;
    point.timeseries.reset();
    const CoexistenceResult expected = run_scenario(point);

    const auto n = std::size_t(std::floor(spec.duration_s / spec.interval_s + 1e-9));
    std::vector<TimeseriesSample> samples(n);
    for_each_index(n, policy, [&](std::size_t i) {
        samples[i] = sample_interval(expected, config, spec.seed, i, spec.interval_s);
    });
    return samples;
}

std::string format_ce_report(double skr_bps, PowerDbm p_wdm, double length_km) {
    const double ce = compute_ce(skr_bps, p_wdm, length_km);
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "co-propagation efficiency report\n"
                  "  skr       : %.6g bit/s\n"
                  "  p_wdm     : %.6g dBm = %.6g mW\n"
                  "  length    : %.6g km\n"
                  "  ce        : %.6g Mb/s*mW*km\n"
                  "  baseline  : %.1f Mb/s*mW*km (%s)\n",
                  skr_bps, p_wdm.value, dbm_to_mw(p_wdm).value, length_km, ce, kReferenceCe,
                  kReferenceCeCitation);
    return buf;
}

}  // namespace qkdcoex
