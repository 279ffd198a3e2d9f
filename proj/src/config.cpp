#include "clpwan/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace clpwan {

namespace {

using nlohmann::json;

struct Issues {
    std::vector<std::string> items;
    void add(const std::string& path, const std::string& what) { items.push_back(path + ": " + what); }
    bool any() const { return !items.empty(); }
};

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed,
                Issues& issues) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known) issues.add(path + "." + it.key(), "unknown key");
    }
}

bool expect_object(const json& j, const std::string& path, Issues& issues) {
    if (j.is_object()) return true;
    issues.add(path, "must be an object");
    return false;
}

// Numeric field with a named requirement; returns fallback on any problem.
double get_number(const json& obj, const char* key, const std::string& path, Issues& issues,
                  double fallback, bool (*ok)(double), const char* requirement) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) {
        issues.add(path + "." + key, "must be a number");
        return fallback;
    }
    const double value = v.get<double>();
    if (!std::isfinite(value) || !ok(value)) {
        issues.add(path + "." + key, requirement);
        return fallback;
    }
    return value;
}

bool get_bool(const json& obj, const char* key, const std::string& path, Issues& issues,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        issues.add(path + "." + key, "must be a boolean");
        return fallback;
    }
    return v.get<bool>();
}

bool positive(double v) { return v > 0.0; }
bool non_negative(double v) { return v >= 0.0; }

// Integer field accepting either JSON integer representation, range checked.
std::optional<uint64_t> as_uint(const json& v, uint64_t min, uint64_t max) {
    if (v.is_number_unsigned()) {
        const uint64_t u = v.get<uint64_t>();
        if (u >= min && u <= max) return u;
    } else if (v.is_number_integer()) {
        const int64_t i = v.get<int64_t>();
        if (i >= 0 && static_cast<uint64_t>(i) >= min && static_cast<uint64_t>(i) <= max)
            return static_cast<uint64_t>(i);
    }
    return std::nullopt;
}

FieldRange get_range(const json& obj, const char* key, const std::string& path, Issues& issues,
                     FieldRange fallback, bool (*ok)(double), const char* requirement) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        issues.add(path + "." + key, "must be a [low, high] number pair");
        return fallback;
    }
    FieldRange r{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(r.low) || !std::isfinite(r.high) || !ok(r.low) || !ok(r.high)) {
        issues.add(path + "." + key, requirement);
        return fallback;
    }
    if (r.low > r.high) {
        issues.add(path + "." + key, "low must be <= high");
        return fallback;
    }
    return r;
}

void apply_profile_override(TechnologyProfile& p, const json& obj, const std::string& path,
                            Issues& issues) {
    check_keys(obj, path,
               {"coverage_m", "data_rate_bps", "bandwidth_hz", "spectrum", "max_payload_bytes",
                "max_messages_per_day", "fixed_overhead_s", "tx_power_w", "per_message_overhead_j",
                "battery_life"},
               issues);
    p.coverage_m = get_number(obj, "coverage_m", path, issues, p.coverage_m, positive, "must be > 0");
    p.data_rate_bps =
        get_number(obj, "data_rate_bps", path, issues, p.data_rate_bps, positive, "must be > 0");
    p.bandwidth_hz =
        get_number(obj, "bandwidth_hz", path, issues, p.bandwidth_hz, positive, "must be > 0");
    p.fixed_overhead_s = get_number(obj, "fixed_overhead_s", path, issues, p.fixed_overhead_s,
                                    non_negative, "must be >= 0");
    p.tx_power_w = get_number(obj, "tx_power_w", path, issues, p.tx_power_w, positive, "must be > 0");
    p.per_message_overhead_j = get_number(obj, "per_message_overhead_j", path, issues,
                                          p.per_message_overhead_j, non_negative, "must be >= 0");
    if (obj.contains("spectrum")) {
        const json& v = obj.at("spectrum");
        auto s = v.is_string() ? spectrum_from_string(v.get<std::string>()) : std::nullopt;
        if (!s)
            issues.add(path + ".spectrum", "must be \"licensed\" or \"unlicensed\"");
        else
            p.spectrum = *s;
    }
    if (obj.contains("battery_life")) {
        const json& v = obj.at("battery_life");
        if (!v.is_string())
            issues.add(path + ".battery_life", "must be a string");
        else
            p.battery_life = v.get<std::string>();
    }
    // Caps accept null to mean "unlimited".
    auto cap = [&](const char* key, std::optional<uint32_t>& field) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (v.is_null()) {
            field.reset();
        } else if (auto u = as_uint(v, 1, UINT32_MAX)) {
            field = static_cast<uint32_t>(*u);
        } else {
            issues.add(path + "." + key, "must be a positive integer or null");
        }
    };
    cap("max_payload_bytes", p.max_payload_bytes);
    cap("max_messages_per_day", p.max_messages_per_day);
}

TechnologyRegistry parse_technologies(const json& section, Issues& issues) {
    TechnologyRegistry registry = builtin_registry();
    if (!expect_object(section, "technologies", issues)) return registry;
    std::vector<TechnologyProfile> profiles = registry.profiles();
    for (auto it = section.begin(); it != section.end(); ++it) {
        auto id = technology_from_string(it.key());
        if (!id) {
            issues.add("technologies." + it.key(), "unknown technology id");
            continue;
        }
        const std::string path = "technologies." + it.key();
        if (!expect_object(it.value(), path, issues)) continue;
        for (auto& p : profiles)
            if (p.id == *id) apply_profile_override(p, it.value(), path, issues);
    }
    if (issues.any()) return registry;
    return TechnologyRegistry(std::move(profiles));
}

void parse_pattern(const json& obj, const std::string& path, PatternDistribution& pattern,
                   bool require_all, Issues& issues) {
    check_keys(obj, path,
               {"data_volume_bytes", "latency_budget_s", "required_rate_bps", "mobility_mps",
                "compute_complexity"},
               issues);
    if (require_all)
        for (const char* key : {"data_volume_bytes", "latency_budget_s", "required_rate_bps",
                                "mobility_mps", "compute_complexity"})
            if (!obj.contains(key)) issues.add(path + "." + key, "required range is missing");
    pattern.data_volume_bytes = get_range(obj, "data_volume_bytes", path, issues,
                                          pattern.data_volume_bytes, positive, "must be >= 1");
    pattern.latency_budget_s = get_range(obj, "latency_budget_s", path, issues,
                                         pattern.latency_budget_s, positive, "must be > 0");
    pattern.required_rate_bps = get_range(obj, "required_rate_bps", path, issues,
                                          pattern.required_rate_bps, non_negative, "must be >= 0");
    pattern.mobility_mps = get_range(obj, "mobility_mps", path, issues, pattern.mobility_mps,
                                     non_negative, "must be >= 0");
    pattern.compute_complexity = get_range(obj, "compute_complexity", path, issues,
                                           pattern.compute_complexity, non_negative, "must be >= 0");
}

WorkloadSpec parse_workload(const json& section, Issues& issues) {
    WorkloadSpec w;
    if (!expect_object(section, "workload", issues)) return w;
    check_keys(section, "workload",
               {"builtin", "name", "mean_interarrival_s", "device_count", "duration_s", "seed",
                "pattern"},
               issues);

    bool from_builtin = false;
    if (section.contains("builtin")) {
        const json& v = section.at("builtin");
        if (v.is_string()) {
            try {
                w = builtin_workload(v.get<std::string>());
                from_builtin = true;
            } catch (const std::invalid_argument&) {
                issues.add("workload.builtin", "unknown built-in workload \"" +
                                                   v.get<std::string>() + "\"");
                return w;
            }
        } else {
            issues.add("workload.builtin", "must be a string");
            return w;
        }
    } else {
        for (const char* key : {"mean_interarrival_s", "device_count", "duration_s", "seed", "pattern"})
            if (!section.contains(key)) issues.add(std::string("workload.") + key, "required key is missing");
    }

    if (section.contains("name")) {
        const json& v = section.at("name");
        if (v.is_string())
            w.name = v.get<std::string>();
        else
            issues.add("workload.name", "must be a string");
    } else if (!from_builtin) {
        w.name = "custom";
    }
    w.mean_interarrival_s = get_number(section, "mean_interarrival_s", "workload", issues,
                                       w.mean_interarrival_s, positive, "must be > 0");
    if (section.contains("device_count")) {
        if (auto u = as_uint(section.at("device_count"), 1, UINT32_MAX))
            w.device_count = static_cast<uint32_t>(*u);
        else
            issues.add("workload.device_count", "must be a positive integer");
    }
    w.duration_s =
        get_number(section, "duration_s", "workload", issues, w.duration_s, positive, "must be > 0");
    if (section.contains("seed")) {
        if (auto u = as_uint(section.at("seed"), 0, UINT64_MAX))
            w.seed = *u;
        else
            issues.add("workload.seed", "must be a non-negative integer");
    }
    if (section.contains("pattern")) {
        if (expect_object(section.at("pattern"), "workload.pattern", issues))
            parse_pattern(section.at("pattern"), "workload.pattern", w.pattern, !from_builtin, issues);
    }
    return w;
}

EngineConfig parse_engine(const json& section, FeatureBounds& bounds, bool& bounds_given,
                          Issues& issues) {
    EngineConfig e;
    if (!expect_object(section, "engine", issues)) return e;
    check_keys(section, "engine",
               {"k", "epsilon", "admission", "bootstrap_count", "weight_delay", "weight_energy",
                "feature_bounds"},
               issues);
    if (section.contains("k")) {
        const json& v = section.at("k");
        if (v.is_number_integer() && v.get<int64_t>() >= 1)
            e.k = static_cast<int>(v.get<int64_t>());
        else
            issues.add("engine.k", "must be an integer >= 1");
    }
    e.epsilon = get_number(section, "epsilon", "engine", issues, e.epsilon, positive, "must be > 0");
    e.admission = get_bool(section, "admission", "engine", issues, e.admission);
    if (section.contains("bootstrap_count")) {
        if (auto u = as_uint(section.at("bootstrap_count"), 0, UINT32_MAX))
            e.bootstrap_count = static_cast<uint32_t>(*u);
        else
            issues.add("engine.bootstrap_count", "must be a non-negative integer");
    }
    e.weight_delay = get_number(section, "weight_delay", "engine", issues, e.weight_delay,
                                non_negative, "must be >= 0");
    e.weight_energy = get_number(section, "weight_energy", "engine", issues, e.weight_energy,
                                 non_negative, "must be >= 0");
    if (section.contains("feature_bounds")) {
        const json& fb = section.at("feature_bounds");
        if (expect_object(fb, "engine.feature_bounds", issues)) {
            PatternDistribution as_ranges;
            parse_pattern(fb, "engine.feature_bounds", as_ranges, true, issues);
            auto arr = as_ranges.as_array();
            for (size_t i = 0; i < kFeatureCount; ++i) {
                bounds.field[i] = arr[i];
                if (!(arr[i].low < arr[i].high))
                    issues.add(std::string("engine.feature_bounds.") + kFeatureNames[i],
                               "min must be < max");
            }
            bounds_given = true;
        }
    }
    return e;
}

void parse_simulation(const json& section, Scenario& s, Issues& issues) {
    if (!expect_object(section, "simulation", issues)) return;
    check_keys(section, "simulation",
               {"seed", "edge_capacity", "edge_compute_s", "cloud_compute_s", "backhaul",
                "distances_m", "volume_buckets_bytes"},
               issues);
    if (section.contains("seed")) {
        if (auto u = as_uint(section.at("seed"), 0, UINT64_MAX))
            s.seed = *u;
        else
            issues.add("simulation.seed", "must be a non-negative integer");
    }
    s.edge_capacity = get_number(section, "edge_capacity", "simulation", issues, s.edge_capacity,
                                 positive, "must be > 0");
    s.edge_compute_s = get_number(section, "edge_compute_s", "simulation", issues, s.edge_compute_s,
                                  non_negative, "must be >= 0");
    s.cloud_compute_s = get_number(section, "cloud_compute_s", "simulation", issues,
                                   s.cloud_compute_s, non_negative, "must be >= 0");
    if (section.contains("backhaul")) {
        const json& b = section.at("backhaul");
        if (expect_object(b, "simulation.backhaul", issues)) {
            check_keys(b, "simulation.backhaul", {"delay_s", "energy_j"}, issues);
            s.backhaul.delay_s = get_number(b, "delay_s", "simulation.backhaul", issues,
                                            s.backhaul.delay_s, non_negative, "must be >= 0");
            s.backhaul.energy_j = get_number(b, "energy_j", "simulation.backhaul", issues,
                                             s.backhaul.energy_j, non_negative, "must be >= 0");
        }
    }
    if (section.contains("distances_m")) {
        const json& d = section.at("distances_m");
        if (expect_object(d, "simulation.distances_m", issues)) {
            for (auto it = d.begin(); it != d.end(); ++it) {
                auto id = technology_from_string(it.key());
                if (!id) {
                    issues.add("simulation.distances_m." + it.key(), "unknown technology id");
                    continue;
                }
                s.distances_m[*id] = get_range(d, it.key().c_str(), "simulation.distances_m", issues,
                                               FieldRange{0, 0}, non_negative, "must be >= 0");
            }
        }
    }
    if (section.contains("volume_buckets_bytes")) {
        const json& v = section.at("volume_buckets_bytes");
        if (!v.is_array()) {
            issues.add("simulation.volume_buckets_bytes", "must be an array of integers");
        } else {
            s.volume_buckets_bytes.clear();
            uint64_t prev = 0;
            for (const auto& edge : v) {
                const auto e = as_uint(edge, 1, UINT64_MAX);
                if (!e) {
                    issues.add("simulation.volume_buckets_bytes", "entries must be positive integers");
                    break;
                }
                if (*e <= prev) {
                    issues.add("simulation.volume_buckets_bytes", "entries must be strictly ascending");
                    break;
                }
                s.volume_buckets_bytes.push_back(*e);
                prev = *e;
            }
        }
    }
}

OutputOptions parse_output(const json& section, Issues& issues) {
    OutputOptions o;
    if (!expect_object(section, "output", issues)) return o;
    check_keys(section, "output", {"charts", "dataset", "decisions"}, issues);
    o.charts = get_bool(section, "charts", "output", issues, o.charts);
    o.dataset = get_bool(section, "dataset", "output", issues, o.dataset);
    o.decisions = get_bool(section, "decisions", "output", issues, o.decisions);
    return o;
}

nlohmann::ordered_json range_json(const FieldRange& r) {
    return nlohmann::ordered_json::array({r.low, r.high});
}

nlohmann::ordered_json pattern_json(const PatternDistribution& p) {
    nlohmann::ordered_json j;
    j["data_volume_bytes"] = range_json(p.data_volume_bytes);
    j["latency_budget_s"] = range_json(p.latency_budget_s);
    j["required_rate_bps"] = range_json(p.required_rate_bps);
    j["mobility_mps"] = range_json(p.mobility_mps);
    j["compute_complexity"] = range_json(p.compute_complexity);
    return j;
}

nlohmann::ordered_json resolved_json(const Config& config) {
    const Scenario& s = config.scenario;
    nlohmann::ordered_json doc;
    doc["technologies"] = registry_to_json(s.registry);

    nlohmann::ordered_json w;
    w["name"] = s.workload.name;
    w["mean_interarrival_s"] = s.workload.mean_interarrival_s;
    w["device_count"] = s.workload.device_count;
    w["duration_s"] = s.workload.duration_s;
    w["seed"] = s.workload.seed;
    w["pattern"] = pattern_json(s.workload.pattern);
    doc["workload"] = w;

    nlohmann::ordered_json e;
    e["k"] = s.engine.k;
    e["epsilon"] = s.engine.epsilon;
    e["admission"] = s.engine.admission;
    e["bootstrap_count"] = s.engine.bootstrap_count;
    e["weight_delay"] = s.engine.weight_delay;
    e["weight_energy"] = s.engine.weight_energy;
    nlohmann::ordered_json fb;
    for (size_t i = 0; i < kFeatureCount; ++i) fb[kFeatureNames[i]] = range_json(s.bounds.field[i]);
    e["feature_bounds"] = fb;
    doc["engine"] = e;

    nlohmann::ordered_json sim;
    sim["seed"] = s.seed;
    sim["edge_capacity"] = s.edge_capacity;
    sim["edge_compute_s"] = s.edge_compute_s;
    sim["cloud_compute_s"] = s.cloud_compute_s;
    sim["backhaul"] = {{"delay_s", s.backhaul.delay_s}, {"energy_j", s.backhaul.energy_j}};
    nlohmann::ordered_json dist;
    for (const auto& profile : s.registry.profiles())
        dist[to_string(profile.id)] = range_json(s.distances_m.at(profile.id));
    sim["distances_m"] = dist;
    sim["volume_buckets_bytes"] = s.volume_buckets_bytes;
    doc["simulation"] = sim;

    doc["output"] = {{"charts", config.output.charts},
                     {"dataset", config.output.dataset},
                     {"decisions", config.output.decisions}};
    return doc;
}

} // namespace

DistanceRanges default_distance_ranges() {
    // Urban deployment: wide-area links a few hundred meters to tens of km
    // from their base station, WiFi always in range, BLE only sometimes.
    return {
        {Technology::SIGFOX, {500, 20000}}, {Technology::LORA, {500, 25000}},
        {Technology::NB_IOT, {500, 12000}}, {Technology::LTE_M, {500, 9000}},
        {Technology::EC_GSM, {500, 12000}}, {Technology::BLE, {2, 30}},
        {Technology::WIFI, {5, 90}},        {Technology::LTE, {500, 9000}},
    };
}

std::vector<uint64_t> default_volume_buckets() { return {50, 256, 1024, 10240, 51200, 204800}; }

Config parse_config(const nlohmann::json& doc, bool require_workload) {
    Issues issues;
    Config config;
    Scenario& s = config.scenario;
    s.distances_m = default_distance_ranges();
    s.volume_buckets_bytes = default_volume_buckets();

    if (!doc.is_object()) {
        issues.add("config", "top level must be an object");
        throw ConfigError(std::move(issues.items));
    }
    check_keys(doc, "config", {"technologies", "workload", "engine", "simulation", "output"}, issues);

    s.registry = doc.contains("technologies") ? parse_technologies(doc.at("technologies"), issues)
                                              : builtin_registry();

    bool have_workload = doc.contains("workload");
    if (!have_workload && require_workload) issues.add("workload", "required section is missing");
    if (have_workload) s.workload = parse_workload(doc.at("workload"), issues);

    bool bounds_given = false;
    if (doc.contains("engine"))
        s.engine = parse_engine(doc.at("engine"), s.bounds, bounds_given, issues);
    if (!bounds_given) s.bounds = FeatureBounds::covering(s.workload.pattern);

    if (doc.contains("simulation")) parse_simulation(doc.at("simulation"), s, issues);
    if (doc.contains("output")) config.output = parse_output(doc.at("output"), issues);

    // Whole-scenario cross checks (only meaningful when sections parsed).
    if (!issues.any() && (have_workload || !require_workload)) {
        try {
            if (have_workload) s.validate();
        } catch (const std::invalid_argument& e) {
            issues.items.emplace_back(e.what());
        }
    }
    if (issues.any()) throw ConfigError(std::move(issues.items));

    config.resolved = resolved_json(config);
    return config;
}

Config load_config(const std::filesystem::path& path, bool require_workload) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line number for the diagnostic
        size_t line = 1;
        for (size_t i = 0; i < std::min(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError({path.string() + ":" + std::to_string(line) + ": " + e.what()});
    }
    return parse_config(doc, require_workload);
}

nlohmann::ordered_json registry_to_json(const TechnologyRegistry& registry) {
    nlohmann::ordered_json out;
    for (const auto& p : registry.profiles()) {
        nlohmann::ordered_json j;
        j["coverage_m"] = p.coverage_m;
        j["data_rate_bps"] = p.data_rate_bps;
        j["bandwidth_hz"] = p.bandwidth_hz;
        j["spectrum"] = to_string(p.spectrum);
        if (p.max_payload_bytes) j["max_payload_bytes"] = *p.max_payload_bytes;
        if (p.max_messages_per_day) j["max_messages_per_day"] = *p.max_messages_per_day;
        j["fixed_overhead_s"] = p.fixed_overhead_s;
        j["tx_power_w"] = p.tx_power_w;
        j["per_message_overhead_j"] = p.per_message_overhead_j;
        j["battery_life"] = p.battery_life;
        out[to_string(p.id)] = j;
    }
    return out;
}

} // namespace clpwan
