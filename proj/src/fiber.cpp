#include "qkdcoex/fiber.hpp"

#include <algorithm>
#include <stdexcept>

namespace qkdcoex {

namespace {
constexpr double kTableMinNm = 1260.0;
constexpr double kTableMaxNm = 1625.0;
}

std::vector<AttenuationKnot> default_attenuation_table() {
    return {
        {1260.0, 0.35},
        {1310.0, 0.33},
        {1550.0, 0.20},
        {1625.0, 0.22},
    };
}

void validate_link(const FiberLink& link) {
    if (!(link.length_km >= 0.0))
        throw std::domain_error("fiber link: length must be non-negative");
    if (link.attenuation_table.size() < 2)
        throw std::domain_error("fiber link: attenuation table needs at least two knots");
    for (std::size_t i = 0; i < link.attenuation_table.size(); ++i) {
        const AttenuationKnot& knot = link.attenuation_table[i];
        if (!(knot.alpha_db_per_km > 0.0 && knot.alpha_db_per_km < 1.0))
            throw std::domain_error("fiber link: alpha must lie in (0, 1) dB/km");
        if (i > 0 && !(knot.wavelength_nm > link.attenuation_table[i - 1].wavelength_nm))
            throw std::domain_error("fiber link: attenuation knots must be strictly increasing");
    }
    if (link.attenuation_table.front().wavelength_nm > kTableMinNm ||
        link.attenuation_table.back().wavelength_nm < kTableMaxNm)
        throw std::domain_error("fiber link: attenuation table must cover 1260-1625 nm");
    if (!(link.fixed_loss_classical_db >= 0.0) || !(link.fixed_loss_quantum_db >= 0.0))
        throw std::domain_error("fiber link: fixed losses must be non-negative");
}

double attenuation_at(const FiberLink& link, double wavelength_nm) {
    const auto& table = link.attenuation_table;
    if (table.size() < 2)
        throw std::domain_error("attenuation_at: attenuation table needs at least two knots");
    if (wavelength_nm < table.front().wavelength_nm || wavelength_nm > table.back().wavelength_nm)
        throw std::domain_error("attenuation_at: wavelength outside attenuation table");

    const auto upper = std::lower_bound(
        table.begin(), table.end(), wavelength_nm,
        [](const AttenuationKnot& knot, double wl) { return knot.wavelength_nm < wl; });
    if (upper == table.begin()) return table.front().alpha_db_per_km;
    if (upper->wavelength_nm == wavelength_nm) return upper->alpha_db_per_km;

    const AttenuationKnot& hi = *upper;
    const AttenuationKnot& lo = *(upper - 1);
    const double t = (wavelength_nm - lo.wavelength_nm) / (hi.wavelength_nm - lo.wavelength_nm);
    return lo.alpha_db_per_km + t * (hi.alpha_db_per_km - lo.alpha_db_per_km);
}

double end_to_end_loss(const FiberLink& link, double wavelength_nm, Band band) {
    if (!(link.length_km >= 0.0))
        throw std::domain_error("end_to_end_loss: length must be non-negative");
    const double fixed = band == Band::classical ? link.fixed_loss_classical_db
                                                 : link.fixed_loss_quantum_db;
    return link.length_km * attenuation_at(link, wavelength_nm) + fixed;
}

PowerDbm fiber_input_power(PowerDbm aux_rx_power, double insertion_loss_db) {
    if (aux_rx_power.is_off()) return aux_rx_power;
    return {aux_rx_power.value - insertion_loss_db};
}

}  // namespace qkdcoex
