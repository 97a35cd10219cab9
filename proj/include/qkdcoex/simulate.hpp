#pragma once

#include <string>

#include "qkdcoex/fiber.hpp"
#include "qkdcoex/qkd.hpp"
#include "qkdcoex/raman.hpp"
#include "qkdcoex/units.hpp"
#include "qkdcoex/wdm.hpp"

namespace qkdcoex {

// Reference wavelengths at which the link budget is quoted. The pump
// attenuation uses the 1550 nm value for the whole comb so that results are
// a function of aggregate power alone, never of the channel layout.
inline constexpr double kClassicalRefWavelengthNm = 1550.0;
inline constexpr double kQuantumWavelengthNm = 1310.0;

struct ResultFlags {
    bool y0_clamped = false;
    bool y1_clamped = false;
    bool e1_clamped = false;
    bool rate_clamped = false;

    bool any() const { return y0_clamped || y1_clamped || e1_clamped || rate_clamped; }
    std::string to_string() const;  // "-" when clean, else ";"-joined names
};

struct CoexistenceResult {
    double length_km = 0.0;
    PowerDbm p_wdm = PowerDbm::off();  // aggregate classical power in the fiber
    int n_channels = 0;                // 0 when the comb is dark
    double skr_bps = 0.0;
    double qber = 0.0;  // signal-state QBER
    double ce = 0.0;    // Mb/s * mW * km
    double loss_classical_db = 0.0;
    double loss_quantum_db = 0.0;
    NoiseBudget noise;
    ChannelStats stats;
    DecoyBounds bounds;
    double q1_lower = 0.0;
    bool secure = false;
    ResultFlags flags;
};

// Co-propagation Efficiency: (SKR in Mb/s) * P_WDM in mW * length in km.
double compute_ce(double skr_bps, PowerDbm p_wdm, double length_km);

// Published baseline for the same metric, kept as a comparison constant.
inline constexpr double kReferenceCe = 9.3;
inline constexpr const char* kReferenceCeCitation =
    "Wang et al., Phys. Rev. A 95, 012301 (2017)";

// End-to-end deterministic model for one configuration:
// link budget -> forward Raman at the quantum receiver -> noise per gate ->
// decoy-state gains/QBER -> single-photon bounds -> secure key rate -> CE.
CoexistenceResult simulate_point(const FiberLink& link, const WdmComb& comb,
                                 const ProtocolParams& proto, const DetectorParams& det,
                                 const RamanParams& raman, double leakage_extinction = 0.0);

}  // namespace qkdcoex
