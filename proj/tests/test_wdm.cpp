#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qkdcoex/wdm.hpp"

using namespace qkdcoex;

TEST_CASE("aggregate power of uniform plans") {
    WdmComb sixty = build_reference_comb(60, PowerDbm{16.8});
    bool all_near = true;
    for (const WdmChannel& ch : sixty.channels)
        all_near = all_near && std::fabs(ch.power.value - -0.9815125038364343) < 1e-9;
    CHECK(all_near);
    CHECK(aggregate_power(sixty).value == doctest::Approx(16.8).epsilon(1e-12));

    WdmComb thirty = build_reference_comb(30, PowerDbm{16.8});
    CHECK(thirty.channels.front().power.value == doctest::Approx(2.0287874528033765).epsilon(1e-12));
    CHECK(aggregate_power(thirty).value == doctest::Approx(16.8).epsilon(1e-12));

    // -1 dBm x 60 and +2 dBm x 30 are the measured per-channel levels
    WdmComb minus_one = make_comb(std::vector<WdmChannel>(sixty.channels));
    for (WdmChannel& ch : minus_one.channels) ch.power = PowerDbm{-1.0};
    CHECK(aggregate_power(minus_one).value == doctest::Approx(16.781512503836435).epsilon(1e-12));

    WdmComb plus_two = make_comb(std::vector<WdmChannel>(thirty.channels));
    for (WdmChannel& ch : plus_two.channels) ch.power = PowerDbm{2.0};
    CHECK(aggregate_power(plus_two).value == doctest::Approx(16.771212547196626).epsilon(1e-12));

    WdmComb single = make_comb({{1550.0, PowerDbm{5.0}}});
    CHECK(aggregate_power(single).value == doctest::Approx(5.0).epsilon(1e-12));

    CHECK_THROWS_AS(aggregate_power(WdmComb{}), std::domain_error);
}

TEST_CASE("reference comb geometry") {
    const WdmComb sixty = build_reference_comb(60, PowerDbm{16.8});
    REQUIRE(sixty.channels.size() == 60);
    CHECK(sixty.channels.front().wavelength_nm == doctest::Approx(1533.6).epsilon(1e-12));
    CHECK(sixty.channels.back().wavelength_nm == doctest::Approx(1557.0979154182119).epsilon(1e-10));
    for (const WdmChannel& ch : sixty.channels) {
        CHECK(ch.wavelength_nm >= 1533.6 - 1e-9);
        CHECK(ch.wavelength_nm <= 1557.1);
    }
    for (std::size_t i = 1; i < sixty.channels.size(); ++i) {
        const double gap = frequency_ghz(sixty.channels[i - 1].wavelength_nm) -
                           frequency_ghz(sixty.channels[i].wavelength_nm);
        CHECK(std::fabs(gap - 50.0) < 0.1);
    }

    const WdmComb thirty = build_reference_comb(30, PowerDbm{16.8});
    REQUIRE(thirty.channels.size() == 30);
    for (std::size_t i = 1; i < thirty.channels.size(); ++i) {
        const double gap = frequency_ghz(thirty.channels[i - 1].wavelength_nm) -
                           frequency_ghz(thirty.channels[i].wavelength_nm);
        CHECK(std::fabs(gap - 100.0) < 0.1);
    }

    CHECK_THROWS_AS(build_reference_comb(45, PowerDbm{16.8}), std::domain_error);
}

TEST_CASE("dark comb aggregates to zero") {
    const WdmComb dark = build_reference_comb(60, PowerDbm::off());
    CHECK(aggregate_power(dark).is_off());
    CHECK(dbm_to_mw(aggregate_power(dark)).value == 0.0);
}

TEST_CASE("aggregate is permutation invariant and strictly monotone") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> power(-10.0, 5.0);
    std::vector<WdmChannel> channels;
    for (int i = 0; i < 16; ++i)
        channels.push_back({1540.0 + i * 0.8, PowerDbm{power(rng)}});

    const double reference = aggregate_power(make_comb(channels)).value;
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(channels.begin(), channels.end(), rng);
        CHECK(aggregate_power(make_comb(channels)).value == reference);
    }

    std::vector<WdmChannel> bumped = channels;
    for (std::size_t i = 0; i < bumped.size(); ++i) {
        bumped[i].power.value += 0.2;
        CHECK(aggregate_power(make_comb(bumped)).value > reference);
        bumped[i].power.value -= 0.2;
    }
}

TEST_CASE("make_comb validation") {
    CHECK_THROWS_AS(make_comb({{1550.0, PowerDbm{0}}, {1550.0, PowerDbm{0}}}), std::domain_error);
    CHECK_THROWS_AS(make_comb({{-1.0, PowerDbm{0}}}), std::domain_error);
    // 50 GHz grid declared but a 60 GHz gap supplied
    const double f = frequency_ghz(1550.0);
    std::vector<WdmChannel> bad = {{1550.0, PowerDbm{0}}, {wavelength_from_ghz(f - 60.0), PowerDbm{0}}};
    CHECK_THROWS_AS(make_comb(bad, 50.0), std::domain_error);
}

TEST_CASE("service channels sit outside the data plan and default dark") {
    WdmComb comb = build_reference_comb(60, PowerDbm{16.8});
    REQUIRE(comb.service_channels.size() == 2);
    for (const WdmChannel& ch : comb.service_channels) {
        CHECK(ch.wavelength_nm < 1533.6);
        CHECK(ch.power.is_off());
    }
    const double base = aggregate_power(comb).value;
    comb.include_service_in_aggregate = true;  // still dark, nothing changes
    CHECK(aggregate_power(comb).value == base);
    comb.service_channels[0].power = PowerDbm{3.0};
    comb.service_channels[1].power = PowerDbm{3.0};
    CHECK(aggregate_power(comb).value > base);
    comb.include_service_in_aggregate = false;
    CHECK(aggregate_power(comb).value == base);
}
