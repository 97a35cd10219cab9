#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qkdcoex {

namespace constants {
inline constexpr double speed_of_light_m_s = 299792458.0;
inline constexpr double planck_j_s = 6.62607015e-34;
}  // namespace constants

// Absolute optical power on the logarithmic scale, 10*log10(P / 1 mW).
// A dark source ("off") is represented as -infinity dBm and maps to 0 mW.
struct PowerDbm {
    double value = 0.0;

    static PowerDbm off() { return {-std::numeric_limits<double>::infinity()}; }
    bool is_off() const { return std::isinf(value) && value < 0.0; }
};

// Linear optical power in milliwatts; never negative.
struct PowerMw {
    double value = 0.0;
};

inline PowerMw dbm_to_mw(PowerDbm p) {
    if (p.is_off()) return {0.0};
    return {std::pow(10.0, p.value / 10.0)};
}

inline PowerDbm mw_to_dbm(PowerMw p) {
    if (!(p.value >= 0.0)) throw std::domain_error("mw_to_dbm: power must be non-negative");
    if (p.value == 0.0) return PowerDbm::off();
    return {10.0 * std::log10(p.value)};
}

// c / lambda; (m/s) / nm comes out directly in GHz.
inline double frequency_ghz(double wavelength_nm) {
    if (!(wavelength_nm > 0.0)) throw std::domain_error("frequency_ghz: wavelength must be positive");
    return constants::speed_of_light_m_s / wavelength_nm;
}

inline double wavelength_from_ghz(double frequency_ghz_value) {
    if (!(frequency_ghz_value > 0.0)) throw std::domain_error("wavelength_from_ghz: frequency must be positive");
    return constants::speed_of_light_m_s / frequency_ghz_value;
}

inline double photon_energy_j(double wavelength_nm) {
    if (!(wavelength_nm > 0.0)) throw std::domain_error("photon_energy_j: wavelength must be positive");
    return constants::planck_j_s * constants::speed_of_light_m_s / (wavelength_nm * 1e-9);
}

}  // namespace qkdcoex
