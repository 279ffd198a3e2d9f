#include "clpwan/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clpwan/rng.hpp"
#include "clpwan/strfmt.hpp"

namespace clpwan {

const char* const kFeatureNames[kFeatureCount] = {
    "data_volume_bytes", "latency_budget_s", "required_rate_bps", "mobility_mps",
    "compute_complexity",
};

void FeatureBounds::validate() const {
    for (size_t i = 0; i < kFeatureCount; ++i) {
        const auto& r = field[i];
        if (!std::isfinite(r.low) || !std::isfinite(r.high))
            throw std::invalid_argument(std::string("feature_bounds.") + kFeatureNames[i] +
                                        ": bounds must be finite");
        if (!(r.low < r.high))
            throw std::invalid_argument(std::string("feature_bounds.") + kFeatureNames[i] +
                                        ": min must be < max");
    }
}

FeatureBounds FeatureBounds::covering(const PatternDistribution& ranges) {
    FeatureBounds b;
    auto src = ranges.as_array();
    for (size_t i = 0; i < kFeatureCount; ++i) {
        b.field[i] = src[i];
        if (!(b.field[i].low < b.field[i].high)) b.field[i].high = b.field[i].low + 1.0;
    }
    return b;
}

void WorkloadSpec::validate() const {
    auto ranges = pattern.as_array();
    for (size_t i = 0; i < kFeatureCount; ++i) {
        if (!std::isfinite(ranges[i].low) || !std::isfinite(ranges[i].high) ||
            ranges[i].low > ranges[i].high)
            throw std::invalid_argument(std::string("workload.pattern.") + kFeatureNames[i] +
                                        ": low must be <= high and finite");
        if (ranges[i].low < 0.0)
            throw std::invalid_argument(std::string("workload.pattern.") + kFeatureNames[i] +
                                        ": must be >= 0");
    }
    if (pattern.data_volume_bytes.low < 1.0)
        throw std::invalid_argument("workload.pattern.data_volume_bytes: must be >= 1");
    if (!(pattern.latency_budget_s.low > 0.0))
        throw std::invalid_argument("workload.pattern.latency_budget_s: must be > 0");
    if (device_count < 1) throw std::invalid_argument("workload.device_count: must be >= 1");
    if (!(duration_s > 0.0)) throw std::invalid_argument("workload.duration_s: must be > 0");
    if (!(mean_interarrival_s > 0.0))
        throw std::invalid_argument("workload.mean_interarrival_s: must be > 0");
}

namespace {

TrafficPattern sample_pattern(Rng& rng, const PatternDistribution& d) {
    TrafficPattern p;
    p.data_volume_bytes = static_cast<uint32_t>(rng.uniform_int(
        static_cast<uint64_t>(d.data_volume_bytes.low),
        static_cast<uint64_t>(d.data_volume_bytes.high)));
    p.latency_budget_s = rng.uniform(d.latency_budget_s.low, d.latency_budget_s.high);
    p.required_rate_bps = rng.uniform(d.required_rate_bps.low, d.required_rate_bps.high);
    p.mobility_mps = rng.uniform(d.mobility_mps.low, d.mobility_mps.high);
    p.compute_complexity = rng.uniform(d.compute_complexity.low, d.compute_complexity.high);
    return p;
}

} // namespace

std::vector<Arrival> generate(const WorkloadSpec& spec) {
    spec.validate();
    std::vector<Arrival> stream;
    for (uint32_t dev = 0; dev < spec.device_count; ++dev) {
        Rng rng(mix_seed(spec.seed, dev));
        double t = rng.exponential(spec.mean_interarrival_s);
        while (t <= spec.duration_s) {
            stream.push_back({t, dev, sample_pattern(rng, spec.pattern)});
            t += rng.exponential(spec.mean_interarrival_s);
        }
    }
    std::stable_sort(stream.begin(), stream.end(), [](const Arrival& a, const Arrival& b) {
        if (a.t_s != b.t_s) return a.t_s < b.t_s;
        return a.device_id < b.device_id;
    });
    return stream;
}

FeatureVector featurize(const TrafficPattern& pattern, const FeatureBounds& bounds) {
    bounds.validate();
    const double raw[kFeatureCount] = {
        static_cast<double>(pattern.data_volume_bytes), pattern.latency_budget_s,
        pattern.required_rate_bps, pattern.mobility_mps, pattern.compute_complexity};
    FeatureVector v{};
    for (size_t i = 0; i < kFeatureCount; ++i) {
        const auto& r = bounds.field[i];
        v[i] = std::clamp((raw[i] - r.low) / (r.high - r.low), 0.0, 1.0);
    }
    return v;
}

WorkloadSpec builtin_workload(const std::string& name) {
    WorkloadSpec w;
    w.name = name;
    if (name == "sensor-telemetry") {
        // tiny payloads, loose latency
        w.mean_interarrival_s = 2.0;
        w.device_count = 40;
        w.duration_s = 250.0;
        w.seed = 101;
        w.pattern.data_volume_bytes = {8, 256};
        w.pattern.latency_budget_s = {5, 60};
        w.pattern.required_rate_bps = {100, 5000};
        w.pattern.mobility_mps = {0, 2};
        w.pattern.compute_complexity = {1, 5};
    } else if (name == "emotion-interaction") {
        // medium payloads, tight latency (interactive recognition traffic)
        w.mean_interarrival_s = 1.0;
        w.device_count = 24;
        w.duration_s = 180.0;
        w.seed = 202;
        w.pattern.data_volume_bytes = {6000, 60000};
        w.pattern.latency_budget_s = {0.2, 1.0};
        w.pattern.required_rate_bps = {50e3, 1e6};
        w.pattern.mobility_mps = {0, 3};
        w.pattern.compute_complexity = {20, 80};
    } else if (name == "bulk-upload") {
        // large payloads, loose latency
        w.mean_interarrival_s = 5.0;
        w.device_count = 20;
        w.duration_s = 1200.0;
        w.seed = 303;
        w.pattern.data_volume_bytes = {1024, 204800};
        w.pattern.latency_budget_s = {10, 120};
        w.pattern.required_rate_bps = {1e4, 1e6};
        w.pattern.mobility_mps = {0, 1};
        w.pattern.compute_complexity = {1, 10};
    } else {
        throw std::invalid_argument("unknown built-in workload: " + name);
    }
    return w;
}

std::vector<std::string> builtin_workload_names() {
    return {"sensor-telemetry", "emotion-interaction", "bulk-upload"};
}

std::string stream_to_csv(const std::vector<Arrival>& stream) {
    std::string out = "t_s,device_id,bytes,latency_s,rate_bps,mobility_mps,compute\n";
    for (const auto& a : stream) {
        out += fmt_g(a.t_s);
        out += ',';
        out += std::to_string(a.device_id);
        out += ',';
        out += std::to_string(a.pattern.data_volume_bytes);
        out += ',';
        out += fmt_g(a.pattern.latency_budget_s);
        out += ',';
        out += fmt_g(a.pattern.required_rate_bps);
        out += ',';
        out += fmt_g(a.pattern.mobility_mps);
        out += ',';
        out += fmt_g(a.pattern.compute_complexity);
        out += '\n';
    }
    return out;
}

} // namespace clpwan
