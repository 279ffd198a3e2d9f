#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "clpwan/sim.hpp"

namespace clpwan {

// All violations found in a configuration, not just the first.
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(problems.empty() ? "invalid configuration" : problems.front()),
          issues(std::move(problems)) {}
    std::vector<std::string> issues;
};

struct OutputOptions {
    bool charts = true;
    bool dataset = true;
    bool decisions = true;
};

struct Config {
    Scenario scenario;
    OutputOptions output;
    // Canonical fully-resolved document; hashing/embedding this in the run
    // manifest is what makes a run reproducible.
    nlohmann::ordered_json resolved;
};

// Sections: technologies, workload, engine, simulation, output. Unknown keys
// are rejected. When require_workload is false (technology listing), a
// partial document is accepted; whatever is present must still validate.
Config parse_config(const nlohmann::json& doc, bool require_workload = true);

// Reads and parses; syntax errors are reported with their line number.
// Throws ConfigError on invalid content, std::runtime_error on I/O failure.
Config load_config(const std::filesystem::path& path, bool require_workload = true);

// The registry rendered in the config-override schema, so emitted JSON can
// be fed back as a configuration fragment.
nlohmann::ordered_json registry_to_json(const TechnologyRegistry& registry);

// Built-in defaults used when the corresponding section entry is absent.
DistanceRanges default_distance_ranges();
std::vector<uint64_t> default_volume_buckets();

} // namespace clpwan
