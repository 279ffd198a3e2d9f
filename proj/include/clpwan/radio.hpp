#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clpwan {

// The radio technologies the selector can choose between. The order here is
// the canonical registry order; probability-vector index i always refers to
// builtin_registry().at(i).
enum class Technology { SIGFOX, LORA, NB_IOT, LTE_M, EC_GSM, BLE, WIFI, LTE };

inline constexpr size_t kTechnologyCount = 8;

const char* to_string(Technology id);
std::optional<Technology> technology_from_string(std::string_view name);

enum class Spectrum { licensed, unlicensed };

const char* to_string(Spectrum s);
std::optional<Spectrum> spectrum_from_string(std::string_view name);

// One technology's parameter set. Coverage is a hard feasibility radius, not
// a path-loss model. Caps that are absent mean "unlimited". battery_life is a
// qualitative class kept for reporting only; it enters no computation.
struct TechnologyProfile {
    Technology id = Technology::SIGFOX;
    double coverage_m = 0.0;
    double data_rate_bps = 0.0;
    double bandwidth_hz = 0.0;
    Spectrum spectrum = Spectrum::unlicensed;
    std::optional<uint32_t> max_payload_bytes;
    std::optional<uint32_t> max_messages_per_day;
    double fixed_overhead_s = 0.0;
    double tx_power_w = 0.0;
    double per_message_overhead_j = 0.0;
    std::string battery_life = "n/a";

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const TechnologyProfile&) const = default;
};

// Ordered, uniquely-keyed list of profiles. The registry's length is the
// category count c; its order is fixed for a run.
class TechnologyRegistry {
  public:
    TechnologyRegistry() = default;
    explicit TechnologyRegistry(std::vector<TechnologyProfile> profiles);

    size_t size() const { return profiles_.size(); }
    const TechnologyProfile& at(size_t index) const { return profiles_.at(index); }
    const std::vector<TechnologyProfile>& profiles() const { return profiles_; }

    std::optional<size_t> index_of(Technology id) const;
    // Throws std::out_of_range if the id is not in the registry.
    const TechnologyProfile& profile(Technology id) const;

    bool operator==(const TechnologyRegistry&) const = default;

  private:
    std::vector<TechnologyProfile> profiles_;
};

// The 8 built-in profiles. Coverage, rate, bandwidth, spectrum and the
// SigFox payload/message caps are the standard figures for each technology;
// the overhead and power constants are this simulator's defaults (see the
// technologies table in configs/default.json).
TechnologyRegistry builtin_registry();

// Per-device radio-side state. distance_m keys define which technologies the
// device knows a link distance for; feasibility checks against a technology
// missing from the map indicate a misconfigured scenario.
struct DeviceRadioState {
    uint32_t device_id = 0;
    std::map<Technology, double> distance_m;
    std::map<Technology, uint32_t> messages_sent_today;
    std::optional<Technology> current_technology;
};

enum class Feasibility { ok, coverage, payload, daily_cap };

const char* to_string(Feasibility verdict);

// Combined admission check, evaluated in the order coverage, payload cap,
// daily message cap; the first violated constraint is reported. Pure.
Feasibility feasible(const TechnologyProfile& profile, const DeviceRadioState& state,
                     uint32_t payload_bytes);

// payload_bytes * 8 / data_rate_bps + fixed_overhead_s. Strictly increasing
// in payload for a fixed profile. Feasibility is the caller's business.
double transmission_delay(const TechnologyProfile& profile, uint32_t payload_bytes);

// tx_power_w * transmission_delay + per_message_overhead_j.
double transmission_energy(const TechnologyProfile& profile, uint32_t payload_bytes);

} // namespace clpwan
