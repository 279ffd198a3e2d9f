#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace clpwan {

// One request's characteristics, as extracted by the perception step.
struct TrafficPattern {
    uint32_t data_volume_bytes = 1;
    double latency_budget_s = 1.0;
    double required_rate_bps = 0.0;
    double mobility_mps = 0.0;
    double compute_complexity = 0.0;
};

// Feature order is fixed artifact-wide: (data volume, latency budget,
// required rate, mobility, compute complexity), each min-max normalized.
inline constexpr size_t kFeatureCount = 5;
using FeatureVector = std::array<double, kFeatureCount>;

extern const char* const kFeatureNames[kFeatureCount];

struct FieldRange {
    double low = 0.0;
    double high = 0.0;
    bool operator==(const FieldRange&) const = default;
};

struct PatternDistribution {
    FieldRange data_volume_bytes{1, 1};
    FieldRange latency_budget_s{1, 1};
    FieldRange required_rate_bps{0, 0};
    FieldRange mobility_mps{0, 0};
    FieldRange compute_complexity{0, 0};

    std::array<FieldRange, kFeatureCount> as_array() const {
        return {data_volume_bytes, latency_budget_s, required_rate_bps, mobility_mps,
                compute_complexity};
    }
    bool operator==(const PatternDistribution&) const = default;
};

// Normalization bounds for featurize(). min < max per field.
struct FeatureBounds {
    std::array<FieldRange, kFeatureCount> field;

    // Throws std::invalid_argument naming the field.
    void validate() const;

    // Bounds spanning a sampling distribution; degenerate ranges are widened
    // by one unit so the normalized span stays valid.
    static FeatureBounds covering(const PatternDistribution& ranges);

    bool operator==(const FeatureBounds&) const = default;
};

struct WorkloadSpec {
    std::string name;
    double mean_interarrival_s = 1.0; // per device
    uint32_t device_count = 1;
    PatternDistribution pattern;
    double duration_s = 1.0;
    uint64_t seed = 0;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const WorkloadSpec&) const = default;
};

struct Arrival {
    double t_s = 0.0;
    uint32_t device_id = 0;
    TrafficPattern pattern;
};

// Poisson arrivals per device, pattern fields sampled uniformly from the
// spec ranges. Timestamps are non-decreasing and the stream is a pure
// function of the spec (seed included).
std::vector<Arrival> generate(const WorkloadSpec& spec);

// clamp((raw - min) / (max - min), 0, 1) per field.
FeatureVector featurize(const TrafficPattern& pattern, const FeatureBounds& bounds);

// Named presets: sensor-telemetry, emotion-interaction, bulk-upload.
// Throws std::invalid_argument for unknown names.
WorkloadSpec builtin_workload(const std::string& name);
std::vector<std::string> builtin_workload_names();

// CSV with header t_s,device_id,bytes,latency_s,rate_bps,mobility_mps,compute
std::string stream_to_csv(const std::vector<Arrival>& stream);

} // namespace clpwan
