#pragma once

#include "qkdcoex/units.hpp"

namespace qkdcoex {

// Spontaneous Raman scattering of the C-band pump into the 1310 nm receiver
// filter. One effective coefficient covers the whole pump band: the
// ~35 THz anti-Stokes shift puts every channel on the far Raman tail, so the
// scattered power depends on the aggregate pump power only.
struct RamanParams {
    double beta_per_km_nm = 1.0e-12;  // noise power per mW pump, km, nm (calibrated)
    double filter_bandwidth_nm = 1.0;
    double alpha_pump_db_per_km = 0.20;
    double alpha_quantum_db_per_km = 0.33;
};

void validate_raman(const RamanParams& params);

struct NoiseBudget {
    PowerMw forward_raman;
    PowerMw backward_raman;
    PowerMw leakage;
    double photon_rate_hz = 0.0;  // total noise photon rate at 1310 nm
};

// Co-propagating scattered power at the fiber output:
//   P_f = P0 * beta * dl * exp(-aq*L) * (exp((aq-ap)*L) - 1) / (aq - ap)
// with a = alpha * ln(10)/10. Reduces to P0*beta*dl*L*exp(-a*L) at ap == aq.
PowerMw forward_raman_power(PowerMw pump_in, double length_km, const RamanParams& params);

// Counter-propagating scattered power back at the pump launch end:
//   P_b = P0 * beta * dl * (1 - exp(-(ap+aq)*L)) / (ap + aq)
PowerMw backward_raman_power(PowerMw pump_in, double length_km, const RamanParams& params);

// Photons per second for a given optical power at one wavelength.
double noise_photon_rate(PowerMw power, double wavelength_nm);

// Expected noise counts per detector gate; noise is uniform in time so only
// the in-gate fraction is seen, thinned by the detector efficiency.
// Requires gate_width * gate_rate <= 1.
double noise_per_gate(double rate_hz, double gate_width_s, double gate_rate_hz,
                      double detector_efficiency);

}  // namespace qkdcoex
