#include "qkdcoex/raman.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkdcoex {

namespace {

// dB/km to natural attenuation per km.
double natural(double alpha_db_per_km) {
    return alpha_db_per_km * std::numbers::ln10 / 10.0;
}

void check_common(PowerMw pump_in, double length_km, const RamanParams& params) {
    validate_raman(params);
    if (!(pump_in.value >= 0.0))
        throw std::domain_error("raman: pump power must be non-negative");
    if (!(length_km >= 0.0))
        throw std::domain_error("raman: length must be non-negative");
}

}  // namespace

void validate_raman(const RamanParams& params) {
    if (!(params.beta_per_km_nm >= 0.0))
        throw std::domain_error("raman: beta must be non-negative");
    if (!(params.filter_bandwidth_nm > 0.0))
        throw std::domain_error("raman: filter bandwidth must be positive");
    if (!(params.alpha_pump_db_per_km > 0.0 && params.alpha_pump_db_per_km < 1.0) ||
        !(params.alpha_quantum_db_per_km > 0.0 && params.alpha_quantum_db_per_km < 1.0))
        throw std::domain_error("raman: alphas must lie in (0, 1) dB/km");
}

PowerMw forward_raman_power(PowerMw pump_in, double length_km, const RamanParams& params) {
    check_common(pump_in, length_km, params);
    const double ap = natural(params.alpha_pump_db_per_km);
    const double aq = natural(params.alpha_quantum_db_per_km);
    const double d = aq - ap;
    // expm1 keeps the ap -> aq limit (P0*beta*dl*L*exp(-a*L)) smooth.
    const double kernel = d == 0.0 ? length_km : std::expm1(d * length_km) / d;
    return {pump_in.value * params.beta_per_km_nm * params.filter_bandwidth_nm *
            std::exp(-aq * length_km) * kernel};
}

PowerMw backward_raman_power(PowerMw pump_in, double length_km, const RamanParams& params) {
    check_common(pump_in, length_km, params);
    const double s = natural(params.alpha_pump_db_per_km) + natural(params.alpha_quantum_db_per_km);
    const double kernel = -std::expm1(-s * length_km) / s;
    return {pump_in.value * params.beta_per_km_nm * params.filter_bandwidth_nm * kernel};
}

double noise_photon_rate(PowerMw power, double wavelength_nm) {
    if (!(power.value >= 0.0))
        throw std::domain_error("noise_photon_rate: power must be non-negative");
    return power.value * 1e-3 / photon_energy_j(wavelength_nm);
}

double noise_per_gate(double rate_hz, double gate_width_s, double gate_rate_hz,
                      double detector_efficiency) {
    if (!(rate_hz >= 0.0))
        throw std::domain_error("noise_per_gate: rate must be non-negative");
    if (!(gate_width_s > 0.0) || !(gate_rate_hz > 0.0))
        throw std::domain_error("noise_per_gate: gate width and rate must be positive");
    if (gate_width_s * gate_rate_hz > 1.0 + 1e-12)
        throw std::domain_error("noise_per_gate: duty factor exceeds 1");
    if (!(detector_efficiency >= 0.0 && detector_efficiency <= 1.0))
        throw std::domain_error("noise_per_gate: efficiency must lie in [0, 1]");
    return rate_hz * gate_width_s * detector_efficiency;
}

}  // namespace qkdcoex
