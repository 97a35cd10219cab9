#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdcoex/fiber.hpp"
#include "qkdcoex/parallel.hpp"
#include "qkdcoex/simulate.hpp"

namespace qkdcoex {

// One measured operating point the simulator must reproduce.
struct AnchorComb {
    bool off = false;
    int n_channels = 60;
    double total_power_dbm = 16.8;
};

struct Anchor {
    double length_km = 50.0;
    AnchorComb comb;
    std::optional<double> target_skr_bps;
    std::optional<double> target_qber;
    double weight = 1.0;
};

std::string describe_anchor(const Anchor& anchor);

// Everything the fit is allowed to touch.
struct ParamSet {
    ProtocolParams protocol;
    DetectorParams detector;
    RamanParams raman;
};

// Known free-parameter names: beta, filter_bandwidth, efficiency, dark_prob,
// e_mis, mu, nu. Throws on anything else.
double get_param(const ParamSet& params, const std::string& name);
void set_param(ParamSet& params, const std::string& name, double value);

struct FreeParam {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    bool log_scale = false;  // optimize log10(x); for decades-spanning params
};

struct FitSpec {
    std::vector<FreeParam> free_params;
    double tolerance = 1.0e-9;  // stop once the residual drops below this
    int max_evals = 4000;       // per restart
    std::uint64_t seed = 1;
    int restarts = 4;
};

// beta and dark_prob on log scale, the protocol/detector knobs linear.
FitSpec default_fit_spec();

// Weighted sum of squared relative errors over all anchor targets:
// SKR terms as (sim/target - 1)^2, QBER terms as ((sim-target)/target)^2.
double residual(const ParamSet& params, const FiberLink& link, const std::vector<Anchor>& anchors);

// Per-anchor worst relative target error for a parameter set (reporting).
std::vector<double> anchor_relative_errors(const ParamSet& params, const FiberLink& link,
                                           const std::vector<Anchor>& anchors);

struct FitReport {
    ParamSet params;
    double residual = 0.0;
    std::vector<double> per_anchor_residual;  // weighted contribution per anchor
    std::vector<double> per_anchor_rel_error; // worst |relative error| per anchor
    int evals = 0;
    bool converged = false;
    // Set when some anchor cannot be brought within rel_error_threshold:
    // names the worst offender instead of silently reweighting.
    std::string binding_anchor;
    double rel_error_threshold = 0.10;
};

// Nelder-Mead simplex over logistic box-transformed parameters.
// Deterministic for a fixed spec/seed; restarts run independently (in
// parallel) and merge by lowest residual with stable tie-breaking. Never
// throws on non-convergence: best-so-far is returned with the flag unset.
FitReport fit(const FitSpec& spec, const FiberLink& link, const std::vector<Anchor>& anchors,
              const ParamSet& start, ExecPolicy policy = ExecPolicy::parallel);

std::string format_fit_report(const FitReport& report, const FiberLink& link,
                              const std::vector<Anchor>& anchors);

}  // namespace qkdcoex
