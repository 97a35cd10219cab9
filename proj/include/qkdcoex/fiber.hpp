#pragma once

#include <vector>

#include "qkdcoex/units.hpp"

namespace qkdcoex {

struct AttenuationKnot {
    double wavelength_nm = 0.0;
    double alpha_db_per_km = 0.0;
};

enum class Band {
    classical,
    quantum,
};

// SMF-28 style defaults. The 1310/1550 nm values together with the fixed
// losses reproduce 25.7 dB / 17.5 dB end to end at 70 km.
std::vector<AttenuationKnot> default_attenuation_table();

struct FiberLink {
    double length_km = 50.0;
    std::vector<AttenuationKnot> attenuation_table = default_attenuation_table();
    double fixed_loss_classical_db = 3.5;
    double fixed_loss_quantum_db = 2.6;
};

// Throws std::domain_error when the link violates its invariants
// (negative length, alphas outside (0,1) dB/km, table not covering
// 1260-1625 nm, unsorted knots).
void validate_link(const FiberLink& link);

// Piecewise-linear interpolation over the knot table.
double attenuation_at(const FiberLink& link, double wavelength_nm);

// length * alpha(lambda) + the band's fixed loss.
double end_to_end_loss(const FiberLink& link, double wavelength_nm, Band band);

// Power at the fiber input given the power at the auxiliary receive port;
// the mux path between them eats insertion_loss_db (1.7 dB measured).
PowerDbm fiber_input_power(PowerDbm aux_rx_power, double insertion_loss_db = 1.7);

}  // namespace qkdcoex
