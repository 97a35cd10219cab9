#pragma once

#include <optional>
#include <vector>

#include "qkdcoex/units.hpp"

namespace qkdcoex {

struct WdmChannel {
    double wavelength_nm = 0.0;
    PowerDbm power;
};

// Classical channel plan. Channels are kept sorted by wavelength; the grid
// is stored in wavelength but validated in frequency. Service channels are
// carried separately and excluded from the aggregate unless the flag is set.
// A plan built from a declared total carries it, so the aggregate is exact
// regardless of how the power is split across channels.
struct WdmComb {
    std::vector<WdmChannel> channels;
    double grid_spacing_ghz = 0.0;  // 0 disables the uniformity check
    std::vector<WdmChannel> service_channels;
    bool include_service_in_aggregate = false;
    std::optional<PowerDbm> declared_aggregate;
};

// Sorts by wavelength and validates: strictly increasing wavelengths and,
// when grid_spacing_ghz > 0, adjacent frequency gaps within 0.1 GHz of it.
WdmComb make_comb(std::vector<WdmChannel> channels, double grid_spacing_ghz = 0.0);

// Sum of channel powers in mW, returned in dBm. Throws on an empty plan.
PowerDbm aggregate_power(const WdmComb& comb);

// The measured C-band plan: 60 channels on an exact 50 GHz frequency grid
// anchored at 1533.6 nm (the long-wavelength end lands at 1557.098 nm), or
// the 30-channel variant keeping every other channel (100 GHz). Per-channel
// power is uniform such that the aggregate equals total_power. The two
// service channels C59/C60 ride along dark by default.
WdmComb build_reference_comb(int n_channels, PowerDbm total_power);

}  // namespace qkdcoex
