#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clpwan/engine.hpp"
#include "clpwan/radio.hpp"
#include "clpwan/traffic.hpp"

namespace clpwan {

// hybrid, or a single pinned technology.
struct Mode {
    std::optional<Technology> fixed; // empty = hybrid

    bool hybrid() const { return !fixed.has_value(); }
    bool operator==(const Mode&) const = default;
};

std::string to_string(const Mode& mode);
// Accepts "hybrid" or "fixed:<TECH>".
std::optional<Mode> mode_from_string(std::string_view text);

// Cost of the edge -> cloud hop, charged per request served at cloud tier.
struct BackhaulProfile {
    double delay_s = 0.0;
    double energy_j = 0.0;
};

struct Scenario {
    TechnologyRegistry registry;
    WorkloadSpec workload;
    Mode mode;
    double edge_capacity = 50.0;
    double edge_compute_s = 0.0;
    double cloud_compute_s = 0.0;
    BackhaulProfile backhaul;
    EngineConfig engine;
    DistanceRanges distances_m; // per-technology device placement ranges
    FeatureBounds bounds;
    std::vector<uint64_t> volume_buckets_bytes; // ascending upper edges
    uint64_t seed = 1;

    // Throws std::invalid_argument before any event is processed.
    void validate() const;
};

enum class Tier { edge, cloud };

const char* to_string(Tier tier);

struct MetricsRecord {
    double t_s = 0.0;
    uint32_t device_id = 0;
    Technology chosen = Technology::SIGFOX;
    double delay_s = 0.0;
    double energy_j = 0.0;
    Tier tier = Tier::edge;
    bool feasible = true;
    double entropy_nats = 0.0;
    bool admitted = false;
};

struct DecisionLogRow {
    uint64_t decision_id = 0;
    double t_s = 0.0;
    uint32_t device_id = 0;
    Technology chosen = Technology::SIGFOX;
    double entropy_nats = 0.0;
    bool admitted = false;
};

struct RunResult {
    std::vector<Arrival> stream;        // the workload, in dispatch order
    std::vector<MetricsRecord> records; // one per arrival, same order
    std::vector<DecisionLogRow> decisions; // hybrid mode only
    Dataset final_dataset;                 // hybrid mode only
};

using AdmissionObserver = std::function<void(const SelectionDecision&, const Dataset&)>;

// Deterministic single-threaded event loop over the workload stream.
RunResult run(const Scenario& scenario, const AdmissionObserver& observer = {});

struct BucketStats {
    uint64_t low_bytes = 0;  // exclusive, except 0 for the first bucket
    uint64_t high_bytes = 0; // inclusive; 0 means unbounded (last bucket)
    size_t requests = 0;
    size_t infeasible = 0;
    double mean_delay_s = 0.0; // over feasible requests
    double p95_delay_s = 0.0;
    double total_energy_j = 0.0;
};

struct ModeSummary {
    Mode mode;
    size_t requests = 0;
    size_t infeasible = 0;
    double mean_delay_s = 0.0;
    double p95_delay_s = 0.0;
    double total_energy_j = 0.0;
    std::vector<BucketStats> buckets;
};

struct ComparisonTable {
    std::vector<ModeSummary> rows;
};

struct ComparisonResult {
    ComparisonTable table;
    std::vector<RunResult> runs; // aligned with table.rows
};

// Runs each mode over the same workload stream (shared seed) and aggregates.
// Modes execute in parallel, capped by the CLPWAN_THREADS environment
// variable; each run owns an independent engine and state.
ComparisonResult compare_modes(const Scenario& base, const std::vector<Mode>& modes);

ModeSummary summarize(const Mode& mode, const RunResult& result,
                      const std::vector<uint64_t>& bucket_edges);

} // namespace clpwan
