#include "qkdcoex/wdm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkdcoex {

namespace {

constexpr double kGridToleranceGhz = 0.1;
constexpr double kCombAnchorNm = 1533.6;   // short-wavelength end of the plan
constexpr int kFullCombChannels = 60;
constexpr double kFullCombSpacingGhz = 50.0;

// Service channels C59/C60 on the 100 GHz ITU grid (195.9 / 196.0 THz).
constexpr double kServiceC59Ghz = 195900.0;
constexpr double kServiceC60Ghz = 196000.0;

}  // namespace

WdmComb make_comb(std::vector<WdmChannel> channels, double grid_spacing_ghz) {
    std::sort(channels.begin(), channels.end(),
              [](const WdmChannel& a, const WdmChannel& b) { return a.wavelength_nm < b.wavelength_nm; });
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (!(channels[i].wavelength_nm > 0.0))
            throw std::domain_error("make_comb: channel wavelength must be positive");
        if (i > 0 && !(channels[i].wavelength_nm > channels[i - 1].wavelength_nm))
            throw std::domain_error("make_comb: channel wavelengths must be strictly increasing");
    }
    if (grid_spacing_ghz > 0.0) {
        for (std::size_t i = 1; i < channels.size(); ++i) {
            const double gap = frequency_ghz(channels[i - 1].wavelength_nm) -
                               frequency_ghz(channels[i].wavelength_nm);
            if (std::fabs(gap - grid_spacing_ghz) > kGridToleranceGhz)
                throw std::domain_error("make_comb: channel spacing not uniform in frequency");
        }
    }
    WdmComb comb;
    comb.channels = std::move(channels);
    comb.grid_spacing_ghz = grid_spacing_ghz;
    return comb;
}

PowerDbm aggregate_power(const WdmComb& comb) {
    if (comb.channels.empty())
        throw std::domain_error("aggregate_power: empty channel plan");
    double total_mw = 0.0;
    for (const WdmChannel& ch : comb.channels) total_mw += dbm_to_mw(ch.power).value;
    if (comb.include_service_in_aggregate)
        for (const WdmChannel& ch : comb.service_channels) total_mw += dbm_to_mw(ch.power).value;
    const PowerDbm summed = mw_to_dbm(PowerMw{total_mw});
    // The declared plan total wins over summation round-off while it still
    // describes the channels (sub-1e-9 dB agreement).
    if (comb.declared_aggregate) {
        const PowerDbm declared = *comb.declared_aggregate;
        if (declared.is_off() && summed.is_off()) return declared;
        if (!declared.is_off() && !summed.is_off() &&
            std::fabs(declared.value - summed.value) < 1e-9)
            return declared;
    }
    return summed;
}

WdmComb build_reference_comb(int n_channels, PowerDbm total_power) {
    if (n_channels != 30 && n_channels != 60)
        throw std::domain_error("build_reference_comb: channel count must be 30 or 60");

    const PowerDbm per_channel =
        total_power.is_off() ? PowerDbm::off()
                             : PowerDbm{total_power.value - 10.0 * std::log10(double(n_channels))};

    // Exact 50 GHz grid anchored at 1533.6 nm, descending in frequency. The
    // 30-channel variant keeps every other channel of the full comb.
    const double f0 = frequency_ghz(kCombAnchorNm);
    const int stride = kFullCombChannels / n_channels;
    std::vector<WdmChannel> channels;
    channels.reserve(std::size_t(n_channels));
    for (int i = 0; i < kFullCombChannels; i += stride) {
        const double f = f0 - kFullCombSpacingGhz * i;
        channels.push_back({wavelength_from_ghz(f), per_channel});
    }

    WdmComb comb = make_comb(std::move(channels), kFullCombSpacingGhz * stride);
    comb.service_channels = {
        {wavelength_from_ghz(kServiceC59Ghz), PowerDbm::off()},
        {wavelength_from_ghz(kServiceC60Ghz), PowerDbm::off()},
    };
    comb.declared_aggregate = total_power;
    return comb;
}

}  // namespace qkdcoex
