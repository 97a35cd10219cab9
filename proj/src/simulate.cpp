#include "qkdcoex/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdcoex {

std::string ResultFlags::to_string() const {
    if (!any()) return "-";
    std::string out;
    auto add = [&out](const char* name) {
        if (!out.empty()) out += ';';
        out += name;
    };
    if (y0_clamped) add("y0_clamped");
    if (y1_clamped) add("y1_clamped");
    if (e1_clamped) add("e1_clamped");
    if (rate_clamped) add("rate_clamped");
    return out;
}

double compute_ce(double skr_bps, PowerDbm p_wdm, double length_km) {
    if (!(skr_bps >= 0.0))
        throw std::domain_error("compute_ce: SKR must be non-negative");
    if (!(length_km >= 0.0))
        throw std::domain_error("compute_ce: length must be non-negative");
    return skr_bps / 1e6 * dbm_to_mw(p_wdm).value * length_km;
}

CoexistenceResult simulate_point(const FiberLink& link, const WdmComb& comb,
                                 const ProtocolParams& proto, const DetectorParams& det,
                                 const RamanParams& raman, double leakage_extinction) {
    validate_link(link);
    validate_protocol(proto);
    validate_detector(det);
    validate_raman(raman);
    if (!(leakage_extinction >= 0.0))
        throw std::domain_error("simulate_point: leakage extinction must be non-negative");

    CoexistenceResult r;
    r.length_km = link.length_km;
    r.loss_classical_db = end_to_end_loss(link, kClassicalRefWavelengthNm, Band::classical);
    r.loss_quantum_db = end_to_end_loss(link, kQuantumWavelengthNm, Band::quantum);

    // All classical-channel effects flow through the aggregate power alone.
    r.p_wdm = aggregate_power(comb);
    const PowerMw pump = dbm_to_mw(r.p_wdm);
    r.n_channels = pump.value > 0.0 ? int(comb.channels.size()) : 0;

    r.noise.forward_raman = forward_raman_power(pump, link.length_km, raman);
    r.noise.backward_raman = backward_raman_power(pump, link.length_km, raman);
    r.noise.leakage =
        PowerMw{leakage_extinction * pump.value * std::pow(10.0, -r.loss_classical_db / 10.0)};
    // everything that reaches the detector sits inside the 1310 nm filter
    r.noise.photon_rate_hz = noise_photon_rate(
        PowerMw{r.noise.forward_raman.value + r.noise.leakage.value}, kQuantumWavelengthNm);

    const double npg = noise_per_gate(r.noise.photon_rate_hz, det.gate_width_s,
                                      proto.pulse_rate_hz, det.efficiency);
    r.flags.y0_clamped = det.dark_prob + npg > 1.0;

    const double transmittance = std::pow(10.0, -r.loss_quantum_db / 10.0);
    const GainQber sig = channel_stats(proto.mu, transmittance, det, npg);
    const GainQber dec = channel_stats(proto.nu, transmittance, det, npg);
    r.stats = {sig.gain, dec.gain, sig.qber, dec.qber,
               std::min(det.dark_prob + npg, 1.0), npg};

    r.bounds = decoy_bounds(r.stats, proto);
    r.flags.y1_clamped = r.bounds.y1_clamped;
    r.flags.e1_clamped = r.bounds.e1_clamped;

    const KeyRateResult key = secure_key_rate(r.stats, r.bounds, proto);
    r.flags.rate_clamped = key.rate_clamped;
    r.skr_bps = key.skr_bps;
    r.q1_lower = key.q1_lower;
    r.secure = key.secure;
    r.qber = sig.qber;
    r.ce = compute_ce(r.skr_bps, r.p_wdm, r.length_km);
    return r;
}

}  // namespace qkdcoex
