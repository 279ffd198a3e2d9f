#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clpwan/radio.hpp"
#include "clpwan/traffic.hpp"

namespace clpwan {

// Per-technology assignment probabilities, aligned with registry order.
// Infeasible technologies carry exactly zero probability.
struct ProbabilityVector {
    std::vector<double> probs;
};

// Pre-selection probability entropy, -sum p ln p with 0 ln 0 = 0. Result is
// in [0, ln c] for a valid probability vector.
double entropy(const ProbabilityVector& p);

enum class LabelOrigin { seed, pseudo, corrected };

const char* to_string(LabelOrigin origin);
std::optional<LabelOrigin> origin_from_string(std::string_view name);

struct LabeledExample {
    FeatureVector features{};
    Technology label = Technology::SIGFOX;
    LabelOrigin origin = LabelOrigin::seed;
    double recorded_entropy = 0.0;
};

// Labeled traffic-pattern store. pseudo_batch indexes the examples that were
// admitted through the entropy gate (seed examples are never in it).
struct Dataset {
    std::vector<LabeledExample> examples;
    std::vector<size_t> pseudo_batch;
};

std::string dataset_to_jsonl(const Dataset& data);
Dataset dataset_from_jsonl(std::istream& in);

struct SelectionDecision {
    uint64_t decision_id = 0;
    FeatureVector features{};
    ProbabilityVector probs;
    double entropy_nats = 0.0;
    Technology chosen = Technology::SIGFOX;
    bool admitted_for_training = false;
};

// Feasibility flags aligned with registry order.
using FeasibilityMask = std::vector<bool>;

// Distance-weighted k-nearest-neighbor vote over the labeled examples
// (Euclidean distance, weight 1/(d+epsilon)). Votes for masked-out
// technologies are zeroed before renormalization; an empty dataset or fully
// zeroed vote falls back to the uniform distribution over feasible
// technologies. `exclude` skips one example (leave-one-out).
// Throws std::invalid_argument when the mask admits nothing.
ProbabilityVector predict_proba(const Dataset& data, const TechnologyRegistry& registry,
                                const FeatureVector& features, const FeasibilityMask& mask,
                                int k, double epsilon,
                                std::optional<size_t> exclude = std::nullopt);

// Feasible technology minimizing w_delay * delay + w_energy * energy for the
// pattern; nullopt when nothing is feasible. Ties break by registry order.
std::optional<Technology> rule_oracle_label(const TechnologyRegistry& registry,
                                            const TrafficPattern& pattern,
                                            const FeasibilityMask& mask, double w_delay,
                                            double w_energy);

struct EngineConfig {
    int k = 5;
    double epsilon = 1e-6;
    bool admission = true;
    uint32_t bootstrap_count = 256;
    double weight_delay = 1.0;
    double weight_energy = 1.0;
};

using DistanceRanges = std::map<Technology, FieldRange>;

struct BootstrapConfig {
    PatternDistribution patterns;
    DistanceRanges distances;
    FeatureBounds bounds;
    double weight_delay = 1.0;
    double weight_energy = 1.0;
};

// Seed dataset labeled by the rule oracle. Each sampled pattern gets its own
// link-distance context drawn from the configured ranges; patterns with no
// feasible technology are skipped. Deterministic under seed.
// Throws std::invalid_argument when count == 0.
Dataset bootstrap_dataset(const TechnologyRegistry& registry, const BootstrapConfig& config,
                          uint32_t count, uint64_t seed);

enum class CorrectionAction { none, relabeled, removed };

// The data/resource cognition loop: probabilistic pre-selection, entropy
// gate for pseudo-label admission, and feedback-driven correction of
// admitted labels. select() is read-only; admit() and feedback() are
// exclusive writes (single-writer contract).
class CognitiveEngine {
  public:
    CognitiveEngine(const TechnologyRegistry& registry, EngineConfig config);

    void seed(Dataset initial);

    // argmax of predict_proba over feasible technologies; ties break by
    // lower energy estimate, then registry order.
    SelectionDecision select(const FeatureVector& features, const FeasibilityMask& mask,
                             const std::vector<double>& energy_estimates_j);

    // Admission gate: the decision's entropy must not exceed the mean
    // leave-one-out prediction entropy of its k nearest labeled examples.
    // On admission the (features, chosen) pair joins the dataset as a pseudo
    // label. An empty dataset admits nothing.
    bool admit(SelectionDecision& decision);

    // The gate's reference entropy for a feature point (exposed so logs can
    // be independently replayed).
    double reference_entropy(const FeatureVector& features) const;

    // Correction on observed performance: when the observed delay blows the
    // pattern's latency budget, the admitted example is relabeled to the
    // feasible technology with minimal model delay, or removed if it already
    // carries that label. Throws std::out_of_range for unknown decision ids.
    CorrectionAction feedback(uint64_t decision_id, double observed_delay_s,
                              double observed_energy_j, const TrafficPattern& pattern,
                              const FeasibilityMask& mask);

    // Whether an admitted decision's example is still in the dataset.
    bool retains(uint64_t decision_id) const;

    // Current dataset index of an admitted decision's example, if retained.
    std::optional<size_t> example_of(uint64_t decision_id) const;

    const Dataset& dataset() const { return data_; }
    const EngineConfig& config() const { return config_; }
    const TechnologyRegistry& registry() const { return *registry_; }

    // Test/verification hook, called just before an admitted example is
    // appended; receives the decision and the dataset as it was gated.
    std::function<void(const SelectionDecision&, const Dataset&)> on_admit;

  private:
    const TechnologyRegistry* registry_;
    EngineConfig config_;
    Dataset data_;
    std::map<uint64_t, size_t> admitted_index_; // decision id -> example index
    uint64_t next_decision_id_ = 1;
};

} // namespace clpwan
