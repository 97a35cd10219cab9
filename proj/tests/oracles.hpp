#pragma once

// Test-only oracles, kept independent of the library code they check:
// quadrature for the scattering integrals, Monte Carlo for the detection
// statistics, exact Poisson sums for synthetic decoy channels.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracles {

// Noise power generated at z co-propagates and attenuates over the rest of
// the span:  P_f(L) = int_0^L beta*dl*P0*e^(-ap z) * e^(-aq (L-z)) dz.
inline double forward_raman_trapezoid(double pump_mw, double length_km, double beta, double dl_nm,
                                      double alpha_pump_db, double alpha_quantum_db,
                                      int steps = 100000) {
    if (length_km == 0.0) return 0.0;
    const double ap = alpha_pump_db * std::numbers::ln10 / 10.0;
    const double aq = alpha_quantum_db * std::numbers::ln10 / 10.0;
    const double h = length_km / steps;
    auto integrand = [&](double z) {
        return beta * dl_nm * pump_mw * std::exp(-ap * z) * std::exp(-aq * (length_km - z));
    };
    double sum = 0.5 * (integrand(0.0) + integrand(length_km));
    for (int i = 1; i < steps; ++i) sum += integrand(i * h);
    return sum * h;
}

// Reversed geometry: noise generated at z travels back to the launch end.
inline double backward_raman_trapezoid(double pump_mw, double length_km, double beta, double dl_nm,
                                       double alpha_pump_db, double alpha_quantum_db,
                                       int steps = 100000) {
    if (length_km == 0.0) return 0.0;
    const double ap = alpha_pump_db * std::numbers::ln10 / 10.0;
    const double aq = alpha_quantum_db * std::numbers::ln10 / 10.0;
    const double h = length_km / steps;
    auto integrand = [&](double z) {
        return beta * dl_nm * pump_mw * std::exp(-(ap + aq) * z);
    };
    double sum = 0.5 * (integrand(0.0) + integrand(length_km));
    for (int i = 1; i < steps; ++i) sum += integrand(i * h);
    return sum * h;
}

struct McStats {
    double gain = 0.0;
    double gain_se = 0.0;
    double qber = 0.0;
    double qber_se = 0.0;
};

// Monte Carlo over Poisson photon numbers with per-photon transmission.
// A background click (probability y0) gives a random bit; otherwise a
// detected signal errs with probability e_mis.
inline McStats mc_channel_stats(double intensity, double eta, double y0, double e_mis,
                                std::uint64_t n_pulses, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::poisson_distribution<int> photons(intensity);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::uint64_t clicks = 0;
    std::uint64_t errors = 0;
    for (std::uint64_t p = 0; p < n_pulses; ++p) {
        const int n = photons(rng);
        bool signal = false;
        for (int k = 0; k < n && !signal; ++k) signal = unif(rng) < eta;
        const bool background = unif(rng) < y0;
        if (!signal && !background) continue;
        ++clicks;
        if (background) {
            if (unif(rng) < 0.5) ++errors;
        } else if (unif(rng) < e_mis) {
            ++errors;
        }
    }

    McStats out;
    out.gain = double(clicks) / double(n_pulses);
    out.gain_se = std::sqrt(out.gain * (1.0 - out.gain) / double(n_pulses));
    if (clicks > 0) {
        out.qber = double(errors) / double(clicks);
        out.qber_se = std::sqrt(out.qber * (1.0 - out.qber) / double(clicks));
    }
    return out;
}

// A channel with known per-photon-number yields and errors; observables are
// exact Poisson sums truncated where the pmf is negligible.
struct SyntheticChannel {
    std::vector<double> yields;  // Y_0 .. Y_nmax
    std::vector<double> errors;  // e_0 .. e_nmax

    double gain(double mu) const {
        double pmf = std::exp(-mu);
        double q = 0.0;
        for (std::size_t n = 0; n < yields.size(); ++n) {
            q += pmf * yields[n];
            pmf *= mu / double(n + 1);
        }
        return q;
    }

    double error_rate(double mu) const {
        double pmf = std::exp(-mu);
        double eq = 0.0;
        for (std::size_t n = 0; n < yields.size(); ++n) {
            eq += pmf * yields[n] * errors[n];
            pmf *= mu / double(n + 1);
        }
        const double q = gain(mu);
        return q > 0.0 ? eq / q : 0.5;
    }
};

// The physical loss-channel profile: Y_n = 1 - (1-Y0)(1-eta)^n with random
// misalignment; e_0 pinned at 1/2.
inline SyntheticChannel loss_channel(double y0, double eta, double e_mis, std::size_t n_max = 50) {
    SyntheticChannel ch;
    ch.yields.resize(n_max + 1);
    ch.errors.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double yn = 1.0 - (1.0 - y0) * std::pow(1.0 - eta, double(n));
        ch.yields[n] = yn;
        ch.errors[n] = n == 0 ? 0.5 : (0.5 * y0 + e_mis * (yn - y0)) / (yn > 0.0 ? yn : 1.0);
    }
    return ch;
}

inline SyntheticChannel random_channel(std::mt19937_64& rng, std::size_t n_max = 50) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SyntheticChannel ch;
    ch.yields.resize(n_max + 1);
    ch.errors.resize(n_max + 1);
    ch.yields[0] = 0.01 * unif(rng);
    ch.errors[0] = 0.5;
    for (std::size_t n = 1; n <= n_max; ++n) {
        ch.yields[n] = unif(rng);
        ch.errors[n] = 0.5 * unif(rng);
    }
    return ch;
}

}  // namespace oracles
