#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "clpwan/radio.hpp"
#include "clpwan/rng.hpp"

using namespace clpwan;

namespace {

DeviceRadioState state_at(Technology id, double distance) {
    DeviceRadioState s;
    s.distance_m[id] = distance;
    return s;
}

TechnologyProfile bare_profile(double rate_bps, double overhead_s = 0.0, double tx_w = 1.0,
                               double msg_j = 0.0) {
    TechnologyProfile p;
    p.id = Technology::LORA;
    p.coverage_m = 1000.0;
    p.data_rate_bps = rate_bps;
    p.bandwidth_hz = 1.0;
    p.fixed_overhead_s = overhead_s;
    p.tx_power_w = tx_w;
    p.per_message_overhead_j = msg_j;
    return p;
}

} // namespace

TEST_CASE("builtin registry carries the published technology parameters") {
    const auto reg = builtin_registry();
    REQUIRE(reg.size() == 8);

    CHECK(reg.profile(Technology::SIGFOX).max_payload_bytes == uint32_t{12});
    CHECK(reg.profile(Technology::SIGFOX).max_messages_per_day == uint32_t{150});
    CHECK(reg.profile(Technology::SIGFOX).coverage_m == 13000.0);
    CHECK(reg.profile(Technology::SIGFOX).data_rate_bps == 100.0);
    CHECK(reg.profile(Technology::LORA).coverage_m == 20000.0);
    CHECK(reg.profile(Technology::LORA).data_rate_bps == 50e3);
    CHECK(reg.profile(Technology::NB_IOT).coverage_m == 15000.0);
    CHECK(reg.profile(Technology::NB_IOT).data_rate_bps == 150e3);
    CHECK(reg.profile(Technology::LTE_M).data_rate_bps == 1e6);
    CHECK(reg.profile(Technology::LTE_M).coverage_m == 11000.0);
    CHECK(reg.profile(Technology::EC_GSM).data_rate_bps == 10e3);
    CHECK(reg.profile(Technology::BLE).coverage_m == 10.0);
    CHECK(reg.profile(Technology::WIFI).coverage_m == 100.0);
    CHECK(reg.profile(Technology::WIFI).data_rate_bps == 100e6);
    CHECK(reg.profile(Technology::LTE).coverage_m == 11000.0);
    CHECK(reg.profile(Technology::LTE).data_rate_bps == 100e6);

    CHECK(reg.profile(Technology::LORA).spectrum == Spectrum::unlicensed);
    CHECK(reg.profile(Technology::NB_IOT).spectrum == Spectrum::licensed);
    CHECK_FALSE(reg.profile(Technology::LORA).max_payload_bytes.has_value());

    for (const auto& p : reg.profiles()) CHECK_NOTHROW(p.validate());
}

TEST_CASE("feasibility checks coverage, payload cap and daily cap in order") {
    const auto reg = builtin_registry();
    const auto& sigfox = reg.profile(Technology::SIGFOX);
    const auto& lora = reg.profile(Technology::LORA);

    CHECK(feasible(sigfox, state_at(Technology::SIGFOX, 5000.0), 12) == Feasibility::ok);
    CHECK(feasible(sigfox, state_at(Technology::SIGFOX, 5000.0), 13) == Feasibility::payload);
    CHECK(feasible(lora, state_at(Technology::LORA, 21000.0), 100) == Feasibility::coverage);
    // boundary: coverage is a strict radius
    CHECK(feasible(lora, state_at(Technology::LORA, 20000.0), 100) == Feasibility::coverage);

    auto s = state_at(Technology::SIGFOX, 5000.0);
    s.messages_sent_today[Technology::SIGFOX] = 150;
    CHECK(feasible(sigfox, s, 12) == Feasibility::daily_cap);
    s.messages_sent_today[Technology::SIGFOX] = 149;
    CHECK(feasible(sigfox, s, 12) == Feasibility::ok);

    // coverage is reported before the payload violation
    CHECK(feasible(sigfox, state_at(Technology::SIGFOX, 14000.0), 13) == Feasibility::coverage);

    // repeated calls agree
    const auto s2 = state_at(Technology::SIGFOX, 5000.0);
    CHECK(feasible(sigfox, s2, 12) == feasible(sigfox, s2, 12));

    CHECK_THROWS_AS(feasible(sigfox, state_at(Technology::LORA, 10.0), 12), std::invalid_argument);
}

TEST_CASE("transmission delay follows bits over rate plus overhead") {
    // 96 bits over 100 bps
    CHECK(transmission_delay(bare_profile(100.0), 12) == doctest::Approx(0.96).epsilon(1e-12));
    // payload bits equal to the rate come out at exactly one second
    CHECK(transmission_delay(bare_profile(80000.0), 10000) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(transmission_delay(bare_profile(50e3), 6250) == doctest::Approx(1.0).epsilon(1e-12));
    // 10000 bits over 50 kbps
    CHECK(transmission_delay(bare_profile(50e3), 1250) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("transmission energy follows power times delay plus message cost") {
    auto zero_power = bare_profile(100.0);
    zero_power.tx_power_w = 0.0; // degenerate profile, function still total
    CHECK(transmission_energy(zero_power, 1) == 0.0);
    CHECK(transmission_energy(zero_power, 100000) == 0.0);

    CHECK(transmission_energy(bare_profile(100.0, 0.0, 1.0), 12) ==
          doctest::Approx(0.96).epsilon(1e-12));

    const auto reg = builtin_registry();
    CHECK(transmission_energy(reg.profile(Technology::BLE), 20) <
          transmission_energy(reg.profile(Technology::LTE), 20));
}

TEST_CASE("delay and energy are monotone in payload for every builtin profile") {
    const auto reg = builtin_registry();
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        uint32_t a = static_cast<uint32_t>(rng.uniform_int(1, 1000000));
        uint32_t b = static_cast<uint32_t>(rng.uniform_int(1, 1000000));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        for (const auto& p : reg.profiles()) {
            CHECK(transmission_delay(p, a) < transmission_delay(p, b));
            CHECK(transmission_energy(p, a) <= transmission_energy(p, b));
        }
    }
}

TEST_CASE("default constants encode the qualitative delay/energy shape") {
    const auto reg = builtin_registry();
    const auto& nbiot = reg.profile(Technology::NB_IOT);
    const auto& ble = reg.profile(Technology::BLE);
    const auto& wifi = reg.profile(Technology::WIFI);
    const auto& lte = reg.profile(Technology::LTE);

    for (uint32_t bytes : {1u, 8u, 20u, 50u}) {
        for (const auto* cheap : {&nbiot, &ble})
            for (const auto* fast : {&wifi, &lte})
                CHECK(transmission_energy(*cheap, bytes) < transmission_energy(*fast, bytes));
    }
    for (uint32_t bytes : {10000u, 10240u, 100000u, 1000000u}) {
        for (const auto* fast : {&wifi, &lte})
            for (const auto* slow : {&nbiot, &ble})
                CHECK(transmission_delay(*fast, bytes) < transmission_delay(*slow, bytes));
    }
}

TEST_CASE("profile validation names the offending field") {
    auto p = builtin_registry().profile(Technology::LORA);
    p.data_rate_bps = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), "LORA: data_rate_bps must be > 0", std::invalid_argument);

    auto q = builtin_registry().profile(Technology::SIGFOX);
    q.max_payload_bytes = 0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("registry rejects duplicate ids and resolves indices") {
    auto profiles = builtin_registry().profiles();
    CHECK(TechnologyRegistry(profiles).index_of(Technology::WIFI) == size_t{6});
    profiles.push_back(profiles.front());
    auto make_duplicate = [&] { return TechnologyRegistry(profiles); };
    CHECK_THROWS_AS(make_duplicate(), std::invalid_argument);

    const auto reg = builtin_registry();
    const TechnologyRegistry ble_only({reg.profile(Technology::BLE)});
    CHECK_FALSE(ble_only.index_of(Technology::LTE));
    CHECK_THROWS_AS(ble_only.profile(Technology::LTE), std::out_of_range);
}
