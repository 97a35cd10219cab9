#include "qkdcoex/qkd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkdcoex {

namespace {
constexpr double kVacuumError = 0.5;  // background clicks are random
}

void validate_protocol(const ProtocolParams& p) {
    if (!(p.nu > 0.0 && p.nu < p.mu))
        throw std::domain_error("protocol: intensities must satisfy 0 < nu < mu");
    if (!(p.basis_bias >= 0.5 && p.basis_bias < 1.0))
        throw std::domain_error("protocol: basis bias must lie in [0.5, 1)");
    if (!(p.pulse_rate_hz > 0.0))
        throw std::domain_error("protocol: pulse rate must be positive");
    if (!(p.f_ec >= 1.0))
        throw std::domain_error("protocol: error-correction inefficiency must be >= 1");
}

void validate_detector(const DetectorParams& d) {
    if (!(d.efficiency >= 0.0 && d.efficiency <= 1.0))
        throw std::domain_error("detector: efficiency must lie in [0, 1]");
    if (!(d.dark_prob >= 0.0 && d.dark_prob <= 1.0))
        throw std::domain_error("detector: dark probability must lie in [0, 1]");
    if (!(d.misalignment_error >= 0.0 && d.misalignment_error <= 1.0))
        throw std::domain_error("detector: misalignment error must lie in [0, 1]");
    if (!(d.gate_width_s > 0.0))
        throw std::domain_error("detector: gate width must be positive");
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binary_entropy: probability outside [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

GainQber channel_stats(double intensity, double transmittance, const DetectorParams& det,
                       double noise_per_gate_counts) {
    validate_detector(det);
    if (!(intensity >= 0.0))
        throw std::domain_error("channel_stats: intensity must be non-negative");
    if (!(transmittance > 0.0 && transmittance <= 1.0))
        throw std::domain_error("channel_stats: transmittance must lie in (0, 1]");
    if (!(noise_per_gate_counts >= 0.0))
        throw std::domain_error("channel_stats: noise counts must be non-negative");

    const double y0 = std::min(det.dark_prob + noise_per_gate_counts, 1.0);
    const double eta = transmittance * det.efficiency;
    // signal = (1 - y0)(1 - e^(-eta*mu)) >= 0 by construction
    const double signal = (1.0 - y0) * -std::expm1(-eta * intensity);
    const double gain = y0 + signal;
    if (gain <= 0.0) return {0.0, kVacuumError};
    const double qber = (kVacuumError * y0 + det.misalignment_error * signal) / gain;
    return {gain, qber};
}

DecoyBounds decoy_bounds(const ChannelStats& stats, const ProtocolParams& proto) {
    const double mu = proto.mu;
    const double nu = proto.nu;
    if (!(nu > 0.0 && nu < mu))
        throw std::domain_error("decoy_bounds: intensities must satisfy 0 < nu < mu");
    for (double g : {stats.q_mu, stats.q_nu})
        if (!(g >= 0.0 && g <= 1.0))
            throw std::domain_error("decoy_bounds: gains must lie in [0, 1]");
    for (double e : {stats.e_mu, stats.e_nu})
        if (!(e >= 0.0 && e <= 1.0))
            throw std::domain_error("decoy_bounds: errors must lie in [0, 1]");
    if (!(stats.y0 >= 0.0 && stats.y0 <= 1.0))
        throw std::domain_error("decoy_bounds: vacuum yield must lie in [0, 1]");

    DecoyBounds bounds;
    const double y1_raw = mu / (mu * nu - nu * nu) *
                          (stats.q_nu * std::exp(nu) -
                           stats.q_mu * std::exp(mu) * nu * nu / (mu * mu) -
                           (mu * mu - nu * nu) / (mu * mu) * stats.y0);
    bounds.y1_lower = std::clamp(y1_raw, 0.0, 1.0);
    bounds.y1_clamped = bounds.y1_lower != y1_raw;

    if (bounds.y1_lower == 0.0) {
        bounds.e1_upper = 0.5;  // pessimistic rather than dividing by zero
        bounds.e1_clamped = true;
        return bounds;
    }
    const double e1_raw = (stats.e_nu * stats.q_nu * std::exp(nu) - kVacuumError * stats.y0) /
                          (bounds.y1_lower * nu);
    bounds.e1_upper = std::clamp(e1_raw, 0.0, 0.5);
    bounds.e1_clamped = bounds.e1_upper != e1_raw;
    return bounds;
}

KeyRateResult secure_key_rate(const ChannelStats& stats, const DecoyBounds& bounds,
                              const ProtocolParams& proto) {
    validate_protocol(proto);
    KeyRateResult result;
    result.q1_lower = bounds.y1_lower * proto.mu * std::exp(-proto.mu);
    result.e1_upper = bounds.e1_upper;
    const double sift = proto.basis_bias * proto.basis_bias;
    const double rate = proto.pulse_rate_hz * sift *
                        (result.q1_lower * (1.0 - binary_entropy(bounds.e1_upper)) -
                         proto.f_ec * stats.q_mu * binary_entropy(stats.e_mu));
    result.rate_clamped = rate < 0.0;
    result.skr_bps = std::max(rate, 0.0);
    result.secure = result.skr_bps > 0.0;
    return result;
}

}  // namespace qkdcoex
