#include "clpwan/radio.hpp"

#include <stdexcept>

namespace clpwan {

namespace {

struct TechName {
    Technology id;
    const char* name;
};

constexpr TechName kTechNames[] = {
    {Technology::SIGFOX, "SIGFOX"}, {Technology::LORA, "LORA"},
    {Technology::NB_IOT, "NB_IOT"}, {Technology::LTE_M, "LTE_M"},
    {Technology::EC_GSM, "EC_GSM"}, {Technology::BLE, "BLE"},
    {Technology::WIFI, "WIFI"},     {Technology::LTE, "LTE"},
};

} // namespace

const char* to_string(Technology id) {
    for (const auto& t : kTechNames)
        if (t.id == id) return t.name;
    return "?";
}

std::optional<Technology> technology_from_string(std::string_view name) {
    for (const auto& t : kTechNames)
        if (name == t.name) return t.id;
    return std::nullopt;
}

const char* to_string(Spectrum s) {
    return s == Spectrum::licensed ? "licensed" : "unlicensed";
}

std::optional<Spectrum> spectrum_from_string(std::string_view name) {
    if (name == "licensed") return Spectrum::licensed;
    if (name == "unlicensed") return Spectrum::unlicensed;
    return std::nullopt;
}

const char* to_string(Feasibility verdict) {
    switch (verdict) {
        case Feasibility::ok: return "ok";
        case Feasibility::coverage: return "coverage";
        case Feasibility::payload: return "payload";
        case Feasibility::daily_cap: return "daily_cap";
    }
    return "?";
}

void TechnologyProfile::validate() const {
    auto fail = [this](const char* what) {
        throw std::invalid_argument(std::string(to_string(id)) + ": " + what);
    };
    if (!(coverage_m > 0.0)) fail("coverage_m must be > 0");
    if (!(data_rate_bps > 0.0)) fail("data_rate_bps must be > 0");
    if (!(bandwidth_hz > 0.0)) fail("bandwidth_hz must be > 0");
    if (!(tx_power_w > 0.0)) fail("tx_power_w must be > 0");
    if (fixed_overhead_s < 0.0) fail("fixed_overhead_s must be >= 0");
    if (per_message_overhead_j < 0.0) fail("per_message_overhead_j must be >= 0");
    if (max_payload_bytes && *max_payload_bytes == 0) fail("max_payload_bytes must be > 0");
    if (max_messages_per_day && *max_messages_per_day == 0) fail("max_messages_per_day must be >= 1");
}

TechnologyRegistry::TechnologyRegistry(std::vector<TechnologyProfile> profiles)
    : profiles_(std::move(profiles)) {
    for (size_t i = 0; i < profiles_.size(); ++i) {
        profiles_[i].validate();
        for (size_t j = i + 1; j < profiles_.size(); ++j)
            if (profiles_[i].id == profiles_[j].id)
                throw std::invalid_argument(std::string("duplicate technology id: ") +
                                            to_string(profiles_[i].id));
    }
}

std::optional<size_t> TechnologyRegistry::index_of(Technology id) const {
    for (size_t i = 0; i < profiles_.size(); ++i)
        if (profiles_[i].id == id) return i;
    return std::nullopt;
}

const TechnologyProfile& TechnologyRegistry::profile(Technology id) const {
    if (auto i = index_of(id)) return profiles_[*i];
    throw std::out_of_range(std::string("technology not in registry: ") + to_string(id));
}

TechnologyRegistry builtin_registry() {
    // Rate, coverage, bandwidth and spectrum are the standard figures quoted
    // for each technology; the NB-IoT rate uses the conservative NB-LTE
    // number. Overhead and power columns are this simulator's defaults:
    //
    //   id      overhead_s  tx_w    msg_j
    //   SIGFOX  2.0         0.025   0.05
    //   LORA    0.4         0.1     0.05
    //   NB_IOT  0.1         0.2     0.05
    //   LTE_M   0.05        0.2     0.3
    //   EC_GSM  0.1         0.5     0.4
    //   BLE     0.01        0.01    0.001
    //   WIFI    0.01        0.08    0.3
    //   LTE     0.03        0.25    1.0
    std::vector<TechnologyProfile> p;
    p.push_back({Technology::SIGFOX, 13000.0, 100.0, 100e3, Spectrum::unlicensed,
                 uint32_t{12}, uint32_t{150}, 2.0, 0.025, 0.05, "> 10 years"});
    p.push_back({Technology::LORA, 20000.0, 50e3, 125e3, Spectrum::unlicensed,
                 std::nullopt, std::nullopt, 0.4, 0.1, 0.05, "< 10 years"});
    p.push_back({Technology::NB_IOT, 15000.0, 150e3, 200e3, Spectrum::licensed,
                 std::nullopt, std::nullopt, 0.1, 0.2, 0.05, "> 10 years"});
    p.push_back({Technology::LTE_M, 11000.0, 1e6, 1.4e6, Spectrum::licensed,
                 std::nullopt, std::nullopt, 0.05, 0.2, 0.3, "> 10 years"});
    p.push_back({Technology::EC_GSM, 15000.0, 10e3, 2.4e6, Spectrum::licensed,
                 std::nullopt, std::nullopt, 0.1, 0.5, 0.4, "> 10 years"});
    p.push_back({Technology::BLE, 10.0, 100e3, 2e6, Spectrum::unlicensed,
                 std::nullopt, std::nullopt, 0.01, 0.01, 0.001, "n/a"});
    p.push_back({Technology::WIFI, 100.0, 100e6, 20e6, Spectrum::unlicensed,
                 std::nullopt, std::nullopt, 0.01, 0.08, 0.3, "n/a"});
    p.push_back({Technology::LTE, 11000.0, 100e6, 20e6, Spectrum::licensed,
                 std::nullopt, std::nullopt, 0.03, 0.25, 1.0, "n/a"});
    return TechnologyRegistry(std::move(p));
}

Feasibility feasible(const TechnologyProfile& profile, const DeviceRadioState& state,
                     uint32_t payload_bytes) {
    auto dist = state.distance_m.find(profile.id);
    if (dist == state.distance_m.end())
        throw std::invalid_argument(std::string("device ") + std::to_string(state.device_id) +
                                    " has no link distance for " + to_string(profile.id));
    if (!(dist->second < profile.coverage_m)) return Feasibility::coverage;
    if (profile.max_payload_bytes && payload_bytes > *profile.max_payload_bytes)
        return Feasibility::payload;
    if (profile.max_messages_per_day) {
        auto sent = state.messages_sent_today.find(profile.id);
        uint32_t count = sent == state.messages_sent_today.end() ? 0 : sent->second;
        if (count >= *profile.max_messages_per_day) return Feasibility::daily_cap;
    }
    return Feasibility::ok;
}

double transmission_delay(const TechnologyProfile& profile, uint32_t payload_bytes) {
    return static_cast<double>(payload_bytes) * 8.0 / profile.data_rate_bps +
           profile.fixed_overhead_s;
}

double transmission_energy(const TechnologyProfile& profile, uint32_t payload_bytes) {
    return profile.tx_power_w * transmission_delay(profile, payload_bytes) +
           profile.per_message_overhead_j;
}

} // namespace clpwan
