// Benchmark comparing the serial reference against the OpenMP path for the
// two data-parallel kernels (length sweep, timeseries emulation) and
// verifying that both produce bit-identical output.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "qkdcoex/csv.hpp"
#include "qkdcoex/parallel.hpp"
#include "qkdcoex/scenario.hpp"

using namespace qkdcoex;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

bool identical(const std::vector<CoexistenceResult>& a, const std::vector<CoexistenceResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::memcmp(&a[i].skr_bps, &b[i].skr_bps, sizeof(double)) != 0) return false;
        if (std::memcmp(&a[i].qber, &b[i].qber, sizeof(double)) != 0) return false;
        if (std::memcmp(&a[i].ce, &b[i].ce, sizeof(double)) != 0) return false;
    }
    return true;
}

bool identical_ts(const std::vector<TimeseriesSample>& a, const std::vector<TimeseriesSample>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::memcmp(&a[i], &b[i], sizeof(TimeseriesSample)) != 0) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const int sweep_points = argc > 1 ? std::atoi(argv[1]) : 20000;
    const int intervals = argc > 2 ? std::atoi(argv[2]) : 50000;

    std::printf("threads: %d\n", max_threads());

    ScenarioConfig cfg;
    cfg.sweep = SweepSpec{SweepVariable::length, {}};
    cfg.sweep->values.reserve(std::size_t(sweep_points));
    for (int i = 0; i < sweep_points; ++i)
        cfg.sweep->values.push_back(1.0 + 99.0 * double(i) / double(sweep_points));

    auto t0 = clock_type::now();
    const auto serial_sweep = run_sweep(cfg, ExecPolicy::serial);
    const double sweep_serial_s = seconds_since(t0);

    t0 = clock_type::now();
    const auto parallel_sweep = run_sweep(cfg, ExecPolicy::parallel);
    const double sweep_parallel_s = seconds_since(t0);

    std::printf("sweep      %7d points  serial %8.3f s  parallel %8.3f s  speedup %.2fx  %s\n",
                sweep_points, sweep_serial_s, sweep_parallel_s, sweep_serial_s / sweep_parallel_s,
                identical(serial_sweep, parallel_sweep) ? "bit-identical" : "MISMATCH");

    ScenarioConfig ts_cfg;
    ts_cfg.timeseries = TimeseriesSpec{double(intervals), 1.0, 42};

    t0 = clock_type::now();
    const auto serial_ts = run_timeseries(ts_cfg, ExecPolicy::serial);
    const double ts_serial_s = seconds_since(t0);

    t0 = clock_type::now();
    const auto parallel_ts = run_timeseries(ts_cfg, ExecPolicy::parallel);
    const double ts_parallel_s = seconds_since(t0);

    std::printf("timeseries %7d samples serial %8.3f s  parallel %8.3f s  speedup %.2fx  %s\n",
                intervals, ts_serial_s, ts_parallel_s, ts_serial_s / ts_parallel_s,
                identical_ts(serial_ts, parallel_ts) ? "bit-identical" : "MISMATCH");

    const bool ok = identical(serial_sweep, parallel_sweep) && identical_ts(serial_ts, parallel_ts);
    return ok ? 0 : 1;
}
