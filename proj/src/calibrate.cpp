#include "qkdcoex/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace qkdcoex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CoexistenceResult simulate_anchor(const ParamSet& params, const FiberLink& base_link,
                                  const Anchor& anchor) {
    FiberLink link = base_link;
    link.length_km = anchor.length_km;
    const WdmComb comb =
        anchor.comb.off ? build_reference_comb(60, PowerDbm::off())
                        : build_reference_comb(anchor.comb.n_channels,
                                           PowerDbm{anchor.comb.total_power_dbm});
    return simulate_point(link, comb, params.protocol, params.detector, params.raman);
}

double anchor_residual(const ParamSet& params, const FiberLink& link, const Anchor& anchor) {
    const CoexistenceResult sim = simulate_anchor(params, link, anchor);
    double sum = 0.0;
    if (anchor.target_skr_bps) {
        const double t = *anchor.target_skr_bps;
        sum += (sim.skr_bps / t - 1.0) * (sim.skr_bps / t - 1.0);
    }
    if (anchor.target_qber) {
        const double t = *anchor.target_qber;
        sum += (sim.qber - t) * (sim.qber - t) / (t * t);
    }
    return anchor.weight * sum;
}

bool params_valid(const ParamSet& p) {
    return p.protocol.nu > 0.0 && p.protocol.nu < p.protocol.mu &&
           p.detector.efficiency >= 0.0 && p.detector.efficiency <= 1.0 &&
           p.detector.dark_prob >= 0.0 && p.detector.dark_prob <= 1.0 &&
           p.detector.misalignment_error >= 0.0 && p.detector.misalignment_error <= 0.5 &&
           p.raman.beta_per_km_nm >= 0.0 && p.raman.filter_bandwidth_nm > 0.0;
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double x) { return std::log(x / (1.0 - x)); }

// Logistic box transform: the simplex walks an unconstrained coordinate,
// parameters never leave (lo, hi).
struct BoxTransform {
    std::vector<double> lo;
    std::vector<double> hi;

    std::vector<double> to_params(const std::vector<double>& u) const {
        std::vector<double> x(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * logistic(u[i]);
        return x;
    }

    std::vector<double> from_params(const std::vector<double>& x) const {
        std::vector<double> u(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double span = hi[i] - lo[i];
            const double t = std::clamp((x[i] - lo[i]) / span, 1e-9, 1.0 - 1e-9);
            u[i] = logit(t);
        }
        return u;
    }
};

struct SimplexOutcome {
    std::vector<double> best_u;
    double best_f = kInf;
    int evals = 0;
    bool converged = false;
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5). Keeps the earliest point on residual ties so results are
// stable and reproducible.
SimplexOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& u0, std::uint64_t seed, int max_evals,
                           double f_target) {
    const std::size_t n = u0.size();
    SimplexOutcome out;
    out.best_u = u0;
    if (max_evals <= 0) return out;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<std::vector<double>> verts(n + 1, u0);
    std::vector<double> fv(n + 1);
    int evals = 0;

    auto eval = [&](const std::vector<double>& u) {
        ++evals;
        return f(u);
    };
    auto track_best = [&](const std::vector<double>& u, double fu) {
        if (fu < out.best_f) {
            out.best_f = fu;
            out.best_u = u;
        }
    };

    for (std::size_t k = 0; k < n; ++k)
        verts[k + 1][k] += (unif(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 0.5 * unif(rng));
    for (std::size_t v = 0; v <= n && evals < max_evals; ++v) {
        fv[v] = eval(verts[v]);
        track_best(verts[v], fv[v]);
    }

    std::vector<std::size_t> order(n + 1);
    while (evals < max_evals) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second_worst = order[n - 1];

        if (out.best_f <= f_target ||
            fv[worst] - fv[best] <= 1e-14 * (1.0 + std::fabs(fv[best]))) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v <= n; ++v) {
            if (v == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += verts[v][k];
        }
        for (double& c : centroid) c /= double(n);

        auto blend = [&](double coeff) {
            std::vector<double> p(n);
            for (std::size_t k = 0; k < n; ++k)
                p[k] = centroid[k] + coeff * (centroid[k] - verts[worst][k]);
            return p;
        };

        const std::vector<double> reflected = blend(1.0);
        const double f_reflected = eval(reflected);
        track_best(reflected, f_reflected);

        if (f_reflected < fv[best]) {
            if (evals >= max_evals) break;
            const std::vector<double> expanded = blend(2.0);
            const double f_expanded = eval(expanded);
            track_best(expanded, f_expanded);
            if (f_expanded < f_reflected) {
                verts[worst] = expanded;
                fv[worst] = f_expanded;
            } else {
                verts[worst] = reflected;
                fv[worst] = f_reflected;
            }
        } else if (f_reflected < fv[second_worst]) {
            verts[worst] = reflected;
            fv[worst] = f_reflected;
        } else {
            if (evals >= max_evals) break;
            const bool outside = f_reflected < fv[worst];
            const std::vector<double> contracted = blend(outside ? 0.5 : -0.5);
            const double f_contracted = eval(contracted);
            track_best(contracted, f_contracted);
            if (f_contracted < (outside ? f_reflected : fv[worst])) {
                verts[worst] = contracted;
                fv[worst] = f_contracted;
            } else {
                for (std::size_t v = 0; v <= n; ++v) {
                    if (v == best) continue;
                    for (std::size_t k = 0; k < n; ++k)
                        verts[v][k] = verts[best][k] + 0.5 * (verts[v][k] - verts[best][k]);
                    if (evals >= max_evals) break;
                    fv[v] = eval(verts[v]);
                    track_best(verts[v], fv[v]);
                }
            }
        }
    }
    out.evals = evals;
    return out;
}

}  // namespace

FitSpec default_fit_spec() {
    FitSpec spec;
    spec.free_params = {
        {"beta", 1e-14, 1e-9, true},
        {"efficiency", 0.05, 0.60, false},
        {"dark_prob", 1e-7, 1e-3, true},
        {"e_mis", 0.001, 0.10, false},
        {"mu", 0.20, 0.80, false},
        {"nu", 0.02, 0.18, false},
    };
    return spec;
}

std::string describe_anchor(const Anchor& anchor) {
    char buf[128];
    if (anchor.comb.off) {
        std::snprintf(buf, sizeof(buf), "%g km, comb off", anchor.length_km);
    } else {
        std::snprintf(buf, sizeof(buf), "%g km, %g dBm, %d ch", anchor.length_km,
                      anchor.comb.total_power_dbm, anchor.comb.n_channels);
    }
    return buf;
}

double get_param(const ParamSet& p, const std::string& name) {
    if (name == "beta") return p.raman.beta_per_km_nm;
    if (name == "filter_bandwidth") return p.raman.filter_bandwidth_nm;
    if (name == "efficiency") return p.detector.efficiency;
    if (name == "dark_prob") return p.detector.dark_prob;
    if (name == "e_mis") return p.detector.misalignment_error;
    if (name == "mu") return p.protocol.mu;
    if (name == "nu") return p.protocol.nu;
    throw std::domain_error("unknown fit parameter: " + name);
}

void set_param(ParamSet& p, const std::string& name, double value) {
    if (name == "beta")
        p.raman.beta_per_km_nm = value;
    else if (name == "filter_bandwidth")
        p.raman.filter_bandwidth_nm = value;
    else if (name == "efficiency")
        p.detector.efficiency = value;
    else if (name == "dark_prob")
        p.detector.dark_prob = value;
    else if (name == "e_mis")
        p.detector.misalignment_error = value;
    else if (name == "mu")
        p.protocol.mu = value;
    else if (name == "nu")
        p.protocol.nu = value;
    else
        throw std::domain_error("unknown fit parameter: " + name);
}

double residual(const ParamSet& params, const FiberLink& link, const std::vector<Anchor>& anchors) {
    double sum = 0.0;
    for (const Anchor& anchor : anchors) sum += anchor_residual(params, link, anchor);
    return sum;
}

std::vector<double> anchor_relative_errors(const ParamSet& params, const FiberLink& link,
                                           const std::vector<Anchor>& anchors) {
    std::vector<double> errors;
    errors.reserve(anchors.size());
    for (const Anchor& anchor : anchors) {
        const CoexistenceResult sim = simulate_anchor(params, link, anchor);
        double worst = 0.0;
        if (anchor.target_skr_bps)
            worst = std::max(worst, std::fabs(sim.skr_bps / *anchor.target_skr_bps - 1.0));
        if (anchor.target_qber)
            worst = std::max(worst, std::fabs(sim.qber - *anchor.target_qber) / *anchor.target_qber);
        errors.push_back(worst);
    }
    return errors;
}

FitReport fit(const FitSpec& spec, const FiberLink& link, const std::vector<Anchor>& anchors,
              const ParamSet& start, ExecPolicy policy) {
    if (anchors.empty()) throw std::domain_error("fit: at least one anchor required");
    if (spec.free_params.empty()) throw std::domain_error("fit: at least one free parameter required");
    for (const Anchor& anchor : anchors) {
        if (!anchor.target_skr_bps && !anchor.target_qber)
            throw std::domain_error("fit: anchor without any target: " + describe_anchor(anchor));
        if (anchor.target_skr_bps && !(*anchor.target_skr_bps > 0.0))
            throw std::domain_error("fit: anchor SKR target must be positive");
        if (anchor.target_qber && !(*anchor.target_qber > 0.0 && *anchor.target_qber < 1.0))
            throw std::domain_error("fit: anchor QBER target must lie in (0, 1)");
        if (!(anchor.weight > 0.0))
            throw std::domain_error("fit: anchor weight must be positive");
    }

    BoxTransform box;
    std::vector<double> x0;
    for (const FreeParam& fp : spec.free_params) {
        if (!(std::isfinite(fp.lo) && std::isfinite(fp.hi) && fp.lo < fp.hi))
            throw std::domain_error("fit: bounds for '" + fp.name + "' must be finite and ordered");
        if (fp.log_scale && !(fp.lo > 0.0))
            throw std::domain_error("fit: log-scale bounds for '" + fp.name + "' must be positive");
        box.lo.push_back(fp.log_scale ? std::log10(fp.lo) : fp.lo);
        box.hi.push_back(fp.log_scale ? std::log10(fp.hi) : fp.hi);
        const double v = get_param(start, fp.name);
        x0.push_back(fp.log_scale ? std::log10(std::max(v, fp.lo)) : v);
    }

    auto make_params = [&](const std::vector<double>& x) {
        ParamSet p = start;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const FreeParam& fp = spec.free_params[i];
            set_param(p, fp.name, fp.log_scale ? std::pow(10.0, x[i]) : x[i]);
        }
        return p;
    };
    auto objective = [&](const std::vector<double>& u) {
        const ParamSet p = make_params(box.to_params(u));
        if (!params_valid(p)) return kInf;
        try {
            return residual(p, link, anchors);
        } catch (const std::exception&) {
            return kInf;
        }
    };

    FitReport report;
    report.params = start;
    report.residual = residual(start, link, anchors);
    report.evals = 0;
    report.converged = false;

    if (spec.max_evals > 0) {
        const std::vector<double> u0 = box.from_params(x0);
        const int restarts = std::max(spec.restarts, 1);
        std::vector<SimplexOutcome> outcomes(static_cast<std::size_t>(restarts));
        for_each_index(static_cast<std::size_t>(restarts), policy, [&](std::size_t k) {
            outcomes[k] = nelder_mead(objective, u0, spec.seed + k, spec.max_evals, spec.tolerance);
        });
        // Stable merge: earlier restart wins ties, the untransformed start
        // point is the baseline no outcome may regress below.
        for (const SimplexOutcome& outcome : outcomes) {
            report.evals += outcome.evals;
            if (outcome.best_f < report.residual) {
                report.residual = outcome.best_f;
                report.params = make_params(box.to_params(outcome.best_u));
                report.converged = outcome.converged;
            }
        }
        if (report.residual <= spec.tolerance) report.converged = true;
    }

    report.per_anchor_residual.clear();
    for (const Anchor& anchor : anchors)
        report.per_anchor_residual.push_back(anchor_residual(report.params, link, anchor));
    report.per_anchor_rel_error = anchor_relative_errors(report.params, link, anchors);

    double worst = 0.0;
    std::size_t worst_idx = 0;
    for (std::size_t i = 0; i < report.per_anchor_rel_error.size(); ++i) {
        if (report.per_anchor_rel_error[i] > worst) {
            worst = report.per_anchor_rel_error[i];
            worst_idx = i;
        }
    }
    if (worst > report.rel_error_threshold) report.binding_anchor = describe_anchor(anchors[worst_idx]);
    return report;
}

std::string format_fit_report(const FitReport& report, const FiberLink& link,
                              const std::vector<Anchor>& anchors) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "calibration report\n  residual  : %.6g\n  evals     : %d\n  converged : %s\n",
                  report.residual, report.evals, report.converged ? "yes" : "no");
    out += buf;
    out += "  anchors:\n";
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const CoexistenceResult sim = [&] {
            FiberLink l = link;
            l.length_km = anchors[i].length_km;
            const WdmComb comb = anchors[i].comb.off
                                     ? build_reference_comb(60, PowerDbm::off())
                                     : build_reference_comb(anchors[i].comb.n_channels,
                                                        PowerDbm{anchors[i].comb.total_power_dbm});
            return simulate_point(l, comb, report.params.protocol, report.params.detector,
                                  report.params.raman);
        }();
        std::snprintf(buf, sizeof(buf), "    %-24s", describe_anchor(anchors[i]).c_str());
        out += buf;
        if (anchors[i].target_skr_bps) {
            std::snprintf(buf, sizeof(buf), " skr %.4g / %.4g bit/s", sim.skr_bps,
                          *anchors[i].target_skr_bps);
            out += buf;
        }
        if (anchors[i].target_qber) {
            std::snprintf(buf, sizeof(buf), " qber %.4g / %.4g", sim.qber, *anchors[i].target_qber);
            out += buf;
        }
        std::snprintf(buf, sizeof(buf), " (rel err %.3g)\n", report.per_anchor_rel_error[i]);
        out += buf;
    }
    if (!report.binding_anchor.empty()) {
        std::snprintf(buf, sizeof(buf), "  binding anchor: %s (worst relative error %.3g > %.3g)\n",
                      report.binding_anchor.c_str(),
                      *std::max_element(report.per_anchor_rel_error.begin(),
                                        report.per_anchor_rel_error.end()),
                      report.rel_error_threshold);
        out += buf;
    }
    return out;
}

}  // namespace qkdcoex
