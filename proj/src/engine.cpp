#include "clpwan/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "clpwan/rng.hpp"

namespace clpwan {

double entropy(const ProbabilityVector& p) {
    double h = 0.0;
    for (double v : p.probs)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

const char* to_string(LabelOrigin origin) {
    switch (origin) {
        case LabelOrigin::seed: return "seed";
        case LabelOrigin::pseudo: return "pseudo";
        case LabelOrigin::corrected: return "corrected";
    }
    return "?";
}

std::optional<LabelOrigin> origin_from_string(std::string_view name) {
    if (name == "seed") return LabelOrigin::seed;
    if (name == "pseudo") return LabelOrigin::pseudo;
    if (name == "corrected") return LabelOrigin::corrected;
    return std::nullopt;
}

std::string dataset_to_jsonl(const Dataset& data) {
    std::string out;
    for (const auto& e : data.examples) {
        nlohmann::ordered_json j;
        j["features"] = e.features;
        j["label"] = to_string(e.label);
        j["origin"] = to_string(e.origin);
        j["recorded_entropy"] = e.recorded_entropy;
        out += j.dump();
        out += '\n';
    }
    return out;
}

Dataset dataset_from_jsonl(std::istream& in) {
    Dataset data;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        LabeledExample e;
        auto feats = j.at("features");
        if (!feats.is_array() || feats.size() != kFeatureCount)
            throw std::invalid_argument("dataset line " + std::to_string(lineno) +
                                        ": features must have " + std::to_string(kFeatureCount) +
                                        " entries");
        for (size_t i = 0; i < kFeatureCount; ++i) e.features[i] = feats[i].get<double>();
        auto label = technology_from_string(j.at("label").get<std::string>());
        if (!label)
            throw std::invalid_argument("dataset line " + std::to_string(lineno) +
                                        ": unknown label");
        e.label = *label;
        auto origin = origin_from_string(j.at("origin").get<std::string>());
        if (!origin)
            throw std::invalid_argument("dataset line " + std::to_string(lineno) +
                                        ": unknown origin");
        e.origin = *origin;
        e.recorded_entropy = j.at("recorded_entropy").get<double>();
        if (e.origin != LabelOrigin::seed)
            data.pseudo_batch.push_back(data.examples.size());
        data.examples.push_back(e);
    }
    return data;
}

namespace {

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
    double s = 0.0;
    for (size_t i = 0; i < kFeatureCount; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

size_t count_feasible(const FeasibilityMask& mask) {
    size_t n = 0;
    for (bool f : mask)
        if (f) ++n;
    return n;
}

ProbabilityVector uniform_over(const FeasibilityMask& mask) {
    ProbabilityVector p;
    p.probs.assign(mask.size(), 0.0);
    const double share = 1.0 / static_cast<double>(count_feasible(mask));
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) p.probs[i] = share;
    return p;
}

// k nearest example indices by (distance, index), deterministic under ties.
std::vector<std::pair<double, size_t>> nearest_neighbors(const Dataset& data,
                                                         const FeatureVector& features, int k,
                                                         std::optional<size_t> exclude) {
    std::vector<std::pair<double, size_t>> all;
    all.reserve(data.examples.size());
    for (size_t i = 0; i < data.examples.size(); ++i) {
        if (exclude && *exclude == i) continue;
        all.emplace_back(squared_distance(features, data.examples[i].features), i);
    }
    const size_t kept = std::min<size_t>(static_cast<size_t>(k), all.size());
    std::partial_sort(all.begin(), all.begin() + kept, all.end());
    all.resize(kept);
    return all;
}

} // namespace

ProbabilityVector predict_proba(const Dataset& data, const TechnologyRegistry& registry,
                                const FeatureVector& features, const FeasibilityMask& mask,
                                int k, double epsilon, std::optional<size_t> exclude) {
    if (mask.size() != registry.size())
        throw std::invalid_argument("feasibility mask length does not match registry");
    if (count_feasible(mask) == 0)
        throw std::invalid_argument("no feasible technology for this request");
    if (k < 1) throw std::invalid_argument("neighbor count k must be >= 1");

    auto neighbors = nearest_neighbors(data, features, k, exclude);
    if (neighbors.empty()) return uniform_over(mask);

    std::vector<double> votes(registry.size(), 0.0);
    for (const auto& [d2, idx] : neighbors) {
        auto pos = registry.index_of(data.examples[idx].label);
        if (!pos) continue; // label outside this registry carries no vote
        votes[*pos] += 1.0 / (std::sqrt(d2) + epsilon);
    }

    double total = 0.0;
    for (size_t i = 0; i < votes.size(); ++i) {
        if (!mask[i]) votes[i] = 0.0;
        total += votes[i];
    }
    if (total == 0.0) return uniform_over(mask);

    ProbabilityVector p;
    p.probs.resize(votes.size());
    for (size_t i = 0; i < votes.size(); ++i) p.probs[i] = votes[i] / total;
    return p;
}

std::optional<Technology> rule_oracle_label(const TechnologyRegistry& registry,
                                            const TrafficPattern& pattern,
                                            const FeasibilityMask& mask, double w_delay,
                                            double w_energy) {
    std::optional<Technology> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < registry.size(); ++i) {
        if (!mask[i]) continue;
        const auto& profile = registry.at(i);
        const double cost = w_delay * transmission_delay(profile, pattern.data_volume_bytes) +
                            w_energy * transmission_energy(profile, pattern.data_volume_bytes);
        if (cost < best_cost) {
            best_cost = cost;
            best = profile.id;
        }
    }
    return best;
}

Dataset bootstrap_dataset(const TechnologyRegistry& registry, const BootstrapConfig& config,
                          uint32_t count, uint64_t seed) {
    if (count == 0) throw std::invalid_argument("bootstrap count must be >= 1");
    config.bounds.validate();
    for (const auto& profile : registry.profiles())
        if (!config.distances.count(profile.id))
            throw std::invalid_argument(std::string("bootstrap distances missing ") +
                                        to_string(profile.id));

    Rng rng(mix_seed(seed, 0x626f6f74)); // "boot"
    Dataset data;
    for (uint32_t n = 0; n < count; ++n) {
        TrafficPattern p;
        p.data_volume_bytes = static_cast<uint32_t>(
            rng.uniform_int(static_cast<uint64_t>(config.patterns.data_volume_bytes.low),
                            static_cast<uint64_t>(config.patterns.data_volume_bytes.high)));
        p.latency_budget_s =
            rng.uniform(config.patterns.latency_budget_s.low, config.patterns.latency_budget_s.high);
        p.required_rate_bps = rng.uniform(config.patterns.required_rate_bps.low,
                                          config.patterns.required_rate_bps.high);
        p.mobility_mps = rng.uniform(config.patterns.mobility_mps.low, config.patterns.mobility_mps.high);
        p.compute_complexity = rng.uniform(config.patterns.compute_complexity.low,
                                           config.patterns.compute_complexity.high);

        DeviceRadioState state;
        for (const auto& profile : registry.profiles()) {
            const auto& r = config.distances.at(profile.id);
            state.distance_m[profile.id] = rng.uniform(r.low, r.high);
        }
        FeasibilityMask mask(registry.size());
        for (size_t i = 0; i < registry.size(); ++i)
            mask[i] = feasible(registry.at(i), state, p.data_volume_bytes) == Feasibility::ok;

        auto label = rule_oracle_label(registry, p, mask, config.weight_delay, config.weight_energy);
        if (!label) continue;
        data.examples.push_back(
            {featurize(p, config.bounds), *label, LabelOrigin::seed, 0.0});
    }
    return data;
}

CognitiveEngine::CognitiveEngine(const TechnologyRegistry& registry, EngineConfig config)
    : registry_(&registry), config_(config) {
    if (config_.k < 1) throw std::invalid_argument("engine.k must be >= 1");
    if (!(config_.epsilon > 0.0)) throw std::invalid_argument("engine.epsilon must be > 0");
}

void CognitiveEngine::seed(Dataset initial) {
    data_ = std::move(initial);
    admitted_index_.clear();
}

SelectionDecision CognitiveEngine::select(const FeatureVector& features,
                                          const FeasibilityMask& mask,
                                          const std::vector<double>& energy_estimates_j) {
    if (energy_estimates_j.size() != registry_->size())
        throw std::invalid_argument("energy estimate length does not match registry");

    SelectionDecision d;
    d.decision_id = next_decision_id_++;
    d.features = features;
    d.probs = predict_proba(data_, *registry_, features, mask, config_.k, config_.epsilon);
    d.entropy_nats = entropy(d.probs);

    double best_p = -1.0;
    size_t best = 0;
    for (size_t i = 0; i < d.probs.probs.size(); ++i) {
        if (!mask[i]) continue;
        const double p = d.probs.probs[i];
        if (p > best_p) {
            best_p = p;
            best = i;
        } else if (p == best_p) {
            // tie: prefer the cheaper send, then registry order
            if (energy_estimates_j[i] < energy_estimates_j[best]) best = i;
        }
    }
    d.chosen = registry_->at(best).id;
    return d;
}

double CognitiveEngine::reference_entropy(const FeatureVector& features) const {
    FeasibilityMask all(registry_->size(), true);
    auto neighbors = nearest_neighbors(data_, features, config_.k, std::nullopt);
    double sum = 0.0;
    for (const auto& [d2, idx] : neighbors) {
        auto loo = predict_proba(data_, *registry_, data_.examples[idx].features, all, config_.k,
                                 config_.epsilon, idx);
        sum += entropy(loo);
    }
    return sum / static_cast<double>(neighbors.size());
}

bool CognitiveEngine::admit(SelectionDecision& decision) {
    if (data_.examples.empty()) {
        decision.admitted_for_training = false;
        return false; // nothing to compare against
    }
    const double reference = reference_entropy(decision.features);
    if (decision.entropy_nats > reference) {
        decision.admitted_for_training = false;
        return false;
    }
    if (on_admit) on_admit(decision, data_);
    decision.admitted_for_training = true;
    admitted_index_[decision.decision_id] = data_.examples.size();
    data_.pseudo_batch.push_back(data_.examples.size());
    data_.examples.push_back(
        {decision.features, decision.chosen, LabelOrigin::pseudo, decision.entropy_nats});
    return true;
}

CorrectionAction CognitiveEngine::feedback(uint64_t decision_id, double observed_delay_s,
                                           double /*observed_energy_j*/,
                                           const TrafficPattern& pattern,
                                           const FeasibilityMask& mask) {
    auto it = admitted_index_.find(decision_id);
    if (it == admitted_index_.end())
        throw std::out_of_range("feedback for unknown decision id " + std::to_string(decision_id));
    if (observed_delay_s <= pattern.latency_budget_s) return CorrectionAction::none;

    // The violation is about delay, so the fix is grounded in the delay
    // model: relabel to the fastest feasible technology for this pattern.
    std::optional<size_t> fastest;
    double fastest_delay = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < registry_->size(); ++i) {
        if (!mask[i]) continue;
        const double d = transmission_delay(registry_->at(i), pattern.data_volume_bytes);
        if (d < fastest_delay) {
            fastest_delay = d;
            fastest = i;
        }
    }

    const size_t index = it->second;
    if (fastest && registry_->at(*fastest).id != data_.examples[index].label) {
        data_.examples[index].label = registry_->at(*fastest).id;
        data_.examples[index].origin = LabelOrigin::corrected;
        return CorrectionAction::relabeled;
    }

    // No better label exists; the example is noise.
    data_.examples.erase(data_.examples.begin() + static_cast<ptrdiff_t>(index));
    std::erase(data_.pseudo_batch, index);
    for (auto& b : data_.pseudo_batch)
        if (b > index) --b;
    admitted_index_.erase(it);
    for (auto& [id, idx] : admitted_index_)
        if (idx > index) --idx;
    return CorrectionAction::removed;
}

bool CognitiveEngine::retains(uint64_t decision_id) const {
    return admitted_index_.count(decision_id) != 0;
}

std::optional<size_t> CognitiveEngine::example_of(uint64_t decision_id) const {
    auto it = admitted_index_.find(decision_id);
    if (it == admitted_index_.end()) return std::nullopt;
    return it->second;
}

} // namespace clpwan
