#include "clpwan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <stdexcept>
#include <thread>

#include "clpwan/rng.hpp"

namespace clpwan {

std::string to_string(const Mode& mode) {
    if (mode.hybrid()) return "hybrid";
    return std::string("fixed:") + to_string(*mode.fixed);
}

std::optional<Mode> mode_from_string(std::string_view text) {
    if (text == "hybrid") return Mode{};
    constexpr std::string_view prefix = "fixed:";
    if (text.substr(0, prefix.size()) == prefix) {
        if (auto tech = technology_from_string(text.substr(prefix.size())))
            return Mode{*tech};
    }
    return std::nullopt;
}

const char* to_string(Tier tier) { return tier == Tier::edge ? "edge" : "cloud"; }

void Scenario::validate() const {
    if (registry.size() == 0) throw std::invalid_argument("simulation: registry is empty");
    workload.validate();
    bounds.validate();
    if (!mode.hybrid() && !registry.index_of(*mode.fixed))
        throw std::invalid_argument(std::string("simulation.mode: fixed technology ") +
                                    to_string(*mode.fixed) + " is not in the registry");
    if (!(edge_capacity > 0.0))
        throw std::invalid_argument("simulation.edge_capacity: must be > 0");
    if (edge_compute_s < 0.0 || cloud_compute_s < 0.0)
        throw std::invalid_argument("simulation.*_compute_s: must be >= 0");
    if (backhaul.delay_s < 0.0 || backhaul.energy_j < 0.0)
        throw std::invalid_argument("simulation.backhaul: must be >= 0");
    for (const auto& profile : registry.profiles()) {
        auto it = distances_m.find(profile.id);
        if (it == distances_m.end())
            throw std::invalid_argument(std::string("simulation.distances_m: missing range for ") +
                                        to_string(profile.id));
        if (!(it->second.low >= 0.0) || it->second.low > it->second.high)
            throw std::invalid_argument(std::string("simulation.distances_m.") +
                                        to_string(profile.id) + ": invalid range");
    }
    for (size_t i = 1; i < volume_buckets_bytes.size(); ++i)
        if (volume_buckets_bytes[i] <= volume_buckets_bytes[i - 1])
            throw std::invalid_argument("simulation.volume_buckets_bytes: must be ascending");
}

namespace {

constexpr double kDaySeconds = 86400.0;

struct DeviceContext {
    DeviceRadioState state;
    uint64_t day = 0;
    // Decision whose chosen technology is the device's current carrier.
    uint64_t carrier_decision = 0;
    bool carrier_admitted = false;
};

struct Event {
    double t_s;
    uint64_t seq;
    enum class Kind { arrival, completion } kind;
    size_t arrival_index;

    bool operator>(const Event& other) const {
        if (t_s != other.t_s) return t_s > other.t_s;
        return seq > other.seq;
    }
};

} // namespace

RunResult run(const Scenario& scenario, const AdmissionObserver& observer) {
    scenario.validate();

    RunResult result;
    result.stream = generate(scenario.workload);

    // Device placement: one link distance per technology, fixed for the run.
    Rng placement(mix_seed(scenario.seed, 0x706c6163)); // "plac"
    std::vector<DeviceContext> devices(scenario.workload.device_count);
    for (uint32_t d = 0; d < scenario.workload.device_count; ++d) {
        devices[d].state.device_id = d;
        for (const auto& profile : scenario.registry.profiles()) {
            const auto& range = scenario.distances_m.at(profile.id);
            devices[d].state.distance_m[profile.id] = placement.uniform(range.low, range.high);
        }
    }

    std::optional<CognitiveEngine> engine;
    if (scenario.mode.hybrid()) {
        engine.emplace(scenario.registry, scenario.engine);
        if (observer) engine->on_admit = observer;
        if (scenario.engine.bootstrap_count > 0) {
            BootstrapConfig boot;
            boot.patterns = scenario.workload.pattern;
            boot.distances = scenario.distances_m;
            boot.bounds = scenario.bounds;
            boot.weight_delay = scenario.engine.weight_delay;
            boot.weight_energy = scenario.engine.weight_energy;
            engine->seed(bootstrap_dataset(scenario.registry, boot, scenario.engine.bootstrap_count,
                                           mix_seed(scenario.seed, 0x73656564)));
        }
    }

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
    uint64_t next_seq = 0;
    for (size_t i = 0; i < result.stream.size(); ++i)
        queue.push({result.stream[i].t_s, next_seq++, Event::Kind::arrival, i});

    result.records.resize(result.stream.size());
    size_t in_flight = 0;

    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        if (ev.kind == Event::Kind::completion) {
            --in_flight;
            continue;
        }

        const Arrival& arrival = result.stream[ev.arrival_index];
        const TrafficPattern& pattern = arrival.pattern;
        DeviceContext& dev = devices[arrival.device_id];

        // Daily message counters reset on simulated-day boundaries.
        const auto day = static_cast<uint64_t>(arrival.t_s / kDaySeconds);
        if (day != dev.day) {
            dev.day = day;
            dev.state.messages_sent_today.clear();
        }

        FeasibilityMask mask(scenario.registry.size());
        for (size_t i = 0; i < scenario.registry.size(); ++i)
            mask[i] = feasible(scenario.registry.at(i), dev.state, pattern.data_volume_bytes) ==
                      Feasibility::ok;

        MetricsRecord rec;
        rec.t_s = arrival.t_s;
        rec.device_id = arrival.device_id;
        rec.tier = pattern.compute_complexity > scenario.edge_capacity ? Tier::cloud : Tier::edge;

        auto transmit = [&](Technology tech) {
            const auto& profile = scenario.registry.profile(tech);
            rec.chosen = tech;
            rec.feasible = true;
            rec.delay_s = transmission_delay(profile, pattern.data_volume_bytes);
            rec.energy_j = transmission_energy(profile, pattern.data_volume_bytes);
            if (rec.tier == Tier::cloud) {
                rec.delay_s += scenario.backhaul.delay_s + scenario.cloud_compute_s;
                rec.energy_j += scenario.backhaul.energy_j;
            } else {
                rec.delay_s += scenario.edge_compute_s;
            }
            ++dev.state.messages_sent_today[tech];
            ++in_flight;
            queue.push({arrival.t_s + rec.delay_s, next_seq++, Event::Kind::completion,
                        ev.arrival_index});
        };

        if (!scenario.mode.hybrid()) {
            const Technology tech = *scenario.mode.fixed;
            rec.chosen = tech;
            if (mask[*scenario.registry.index_of(tech)]) {
                transmit(tech);
            } else {
                rec.feasible = false; // dropped, not queued
            }
        } else if (std::none_of(mask.begin(), mask.end(), [](bool f) { return f; })) {
            // Admission control: nothing can carry this request.
            rec.feasible = false;
            rec.chosen = dev.state.current_technology.value_or(scenario.registry.at(0).id);
        } else {
            const FeatureVector features = featurize(pattern, scenario.bounds);
            std::vector<double> energy_estimates(scenario.registry.size());
            for (size_t i = 0; i < scenario.registry.size(); ++i)
                energy_estimates[i] =
                    transmission_energy(scenario.registry.at(i), pattern.data_volume_bytes);

            SelectionDecision decision = engine->select(features, mask, energy_estimates);
            const bool admitted = scenario.engine.admission && engine->admit(decision);
            result.decisions.push_back({decision.decision_id, arrival.t_s, arrival.device_id,
                                        decision.chosen, decision.entropy_nats, admitted});
            rec.entropy_nats = decision.entropy_nats;
            rec.admitted = admitted;

            // The request travels on the sticky technology; an unset or
            // infeasible carrier forces the fresh selection into service now.
            Technology carrier;
            uint64_t carrier_decision;
            bool carrier_admitted;
            const bool sticky_ok = dev.state.current_technology &&
                                   mask[*scenario.registry.index_of(*dev.state.current_technology)];
            if (sticky_ok) {
                carrier = *dev.state.current_technology;
                carrier_decision = dev.carrier_decision;
                carrier_admitted = dev.carrier_admitted;
            } else {
                carrier = decision.chosen;
                carrier_decision = decision.decision_id;
                carrier_admitted = admitted;
            }
            transmit(carrier);

            // Reverse propagation: a blown latency budget corrects the
            // pseudo label of the decision that put this carrier in service.
            if (carrier_admitted && engine->retains(carrier_decision) &&
                rec.delay_s > pattern.latency_budget_s)
                engine->feedback(carrier_decision, rec.delay_s, rec.energy_j, pattern, mask);

            // The fresh selection carries the device's next request.
            dev.state.current_technology = decision.chosen;
            dev.carrier_decision = decision.decision_id;
            dev.carrier_admitted = admitted;
        }

        result.records[ev.arrival_index] = rec;
    }

    if (in_flight != 0) throw std::logic_error("event queue finished with requests in flight");
    if (engine) result.final_dataset = engine->dataset();
    return result;
}

ModeSummary summarize(const Mode& mode, const RunResult& result,
                      const std::vector<uint64_t>& bucket_edges) {
    ModeSummary summary;
    summary.mode = mode;

    const size_t bucket_count = bucket_edges.size() + 1;
    std::vector<std::vector<double>> delays(bucket_count + 1); // last slot = all
    std::vector<double> energy(bucket_count + 1, 0.0);
    std::vector<size_t> requests(bucket_count + 1, 0);
    std::vector<size_t> infeasible(bucket_count + 1, 0);

    for (size_t i = 0; i < result.records.size(); ++i) {
        const auto& rec = result.records[i];
        const uint64_t bytes = result.stream[i].pattern.data_volume_bytes;
        size_t bucket = 0;
        while (bucket < bucket_edges.size() && bytes > bucket_edges[bucket]) ++bucket;
        for (size_t slot : {bucket, bucket_count}) {
            ++requests[slot];
            if (!rec.feasible) {
                ++infeasible[slot];
            } else {
                delays[slot].push_back(rec.delay_s);
                energy[slot] += rec.energy_j;
            }
        }
    }

    auto fill = [&](size_t slot, auto& out) {
        out.requests = requests[slot];
        out.infeasible = infeasible[slot];
        out.total_energy_j = energy[slot];
        auto& d = delays[slot];
        if (!d.empty()) {
            double sum = 0.0;
            for (double v : d) sum += v;
            out.mean_delay_s = sum / static_cast<double>(d.size());
            std::sort(d.begin(), d.end());
            out.p95_delay_s = d[static_cast<size_t>(0.95 * static_cast<double>(d.size() - 1))];
        }
    };

    fill(bucket_count, summary);
    summary.buckets.resize(bucket_count);
    for (size_t b = 0; b < bucket_count; ++b) {
        summary.buckets[b].low_bytes = b == 0 ? 0 : bucket_edges[b - 1];
        summary.buckets[b].high_bytes = b < bucket_edges.size() ? bucket_edges[b] : 0;
        fill(b, summary.buckets[b]);
    }
    return summary;
}

namespace {

size_t thread_cap() {
    if (const char* env = std::getenv("CLPWAN_THREADS")) {
        const long n = std::atol(env);
        if (n >= 1) return static_cast<size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace

ComparisonResult compare_modes(const Scenario& base, const std::vector<Mode>& modes) {
    if (modes.empty()) throw std::invalid_argument("compare_modes: modes must be non-empty");

    ComparisonResult result;
    result.runs.resize(modes.size());

    const size_t cap = std::min(thread_cap(), modes.size());
    std::vector<std::exception_ptr> errors(modes.size());
    for (size_t wave = 0; wave < modes.size(); wave += cap) {
        std::vector<std::thread> workers;
        for (size_t i = wave; i < std::min(wave + cap, modes.size()); ++i) {
            workers.emplace_back([&, i] {
                try {
                    Scenario scenario = base;
                    scenario.mode = modes[i];
                    result.runs[i] = run(scenario);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    for (size_t i = 0; i < modes.size(); ++i)
        result.table.rows.push_back(summarize(modes[i], result.runs[i], base.volume_buckets_bytes));
    return result;
}

} // namespace clpwan
