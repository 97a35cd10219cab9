#pragma once

namespace qkdcoex {

// Efficient BB84 with two decoy intensities (signal mu, weak decoy nu,
// vacuum). Values below are pre-calibration seeds; the shipped defaults are
// fitted and live in configs/.
struct ProtocolParams {
    double mu = 0.4;
    double nu = 0.1;
    double pulse_rate_hz = 1.0e9;
    double basis_bias = 0.9;  // probability of the majority basis
    double f_ec = 1.16;       // error-correction inefficiency
};

struct DetectorParams {
    double efficiency = 0.20;
    double dark_prob = 1.0e-5;  // per gate
    double misalignment_error = 0.025;
    double gate_width_s = 100e-12;
};

void validate_protocol(const ProtocolParams& params);
void validate_detector(const DetectorParams& params);

struct GainQber {
    double gain = 0.0;  // detections per pulse
    double qber = 0.0;
};

// Observables for the two decoy intensities plus the background.
struct ChannelStats {
    double q_mu = 0.0;
    double q_nu = 0.0;
    double e_mu = 0.0;
    double e_nu = 0.0;
    double y0 = 0.0;             // vacuum yield: dark counts + noise per gate
    double noise_per_gate = 0.0;
};

struct DecoyBounds {
    double y1_lower = 0.0;
    double e1_upper = 0.5;
    bool y1_clamped = false;
    bool e1_clamped = false;
};

struct KeyRateResult {
    double skr_bps = 0.0;
    double q1_lower = 0.0;  // single-photon gain lower bound
    double e1_upper = 0.5;
    bool secure = false;
    bool rate_clamped = false;
};

// Binary entropy in bits; h(0) = h(1) = 0.
double binary_entropy(double p);

// Poissonian-source gain model. Background y0 = dark + noise (clamped to 1),
// eta = transmittance * detector efficiency:
//   Q = 1 - (1 - y0) * exp(-eta * intensity)
//   E = (y0/2 + e_mis * (Q - y0)) / Q
GainQber channel_stats(double intensity, double transmittance, const DetectorParams& det,
                       double noise_per_gate_counts);

// Weak+vacuum analytic decoy bounds on the single-photon yield and error.
// Negative intermediates clamp to their physical range (flagged) so sweeps
// over extreme powers complete; y1_lower == 0 pessimistically forces
// e1_upper = 0.5 instead of dividing by zero.
DecoyBounds decoy_bounds(const ChannelStats& stats, const ProtocolParams& proto);

// Asymptotic GLLP rate for efficient BB84:
//   R = pulse_rate * bias^2 * [Q1*(1 - h2(e1)) - f_ec * Qmu * h2(Emu)]
// clamped at zero; secure <=> R > 0.
KeyRateResult secure_key_rate(const ChannelStats& stats, const DecoyBounds& bounds,
                              const ProtocolParams& proto);

}  // namespace qkdcoex
