#include "clpwan/cli.hpp"

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clpwan/config.hpp"
#include "clpwan/report.hpp"
#include "clpwan/strfmt.hpp"

namespace clpwan {

namespace {

uint64_t fnv1a64(std::string_view text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void print_issues(const ConfigError& e) {
    for (const auto& issue : e.issues) std::cerr << "error: " << issue << "\n";
}

std::string cap_text(const std::optional<uint32_t>& cap) {
    return cap ? std::to_string(*cap) : "-";
}

nlohmann::json load_raw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return nlohmann::json::parse(in); // parse errors surfaced via load_config
}

std::string mode_file_tag(const Mode& mode) {
    std::string tag = to_string(mode);
    for (char& c : tag)
        if (c == ':') c = '_';
    return tag;
}

} // namespace

int cmd_list_technologies(const std::string& config_path, const std::string& format) {
    TechnologyRegistry registry;
    try {
        if (config_path.empty()) {
            registry = builtin_registry();
        } else {
            registry = load_config(config_path, /*require_workload=*/false).scenario.registry;
        }
    } catch (const ConfigError& e) {
        print_issues(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["technologies"] = registry_to_json(registry);
        std::cout << doc.dump(2) << "\n";
        return 0;
    }

    std::printf("%-8s %10s %14s %12s %-10s %8s %8s %10s %8s %8s %-10s\n", "id", "coverage_m",
                "data_rate_bps", "bandwidth_hz", "spectrum", "max_pay", "max_msg", "overhead_s",
                "tx_w", "msg_j", "battery");
    for (const auto& p : registry.profiles())
        std::printf("%-8s %10.0f %14.0f %12.0f %-10s %8s %8s %10g %8g %8g %-10s\n",
                    to_string(p.id), p.coverage_m, p.data_rate_bps, p.bandwidth_hz,
                    to_string(p.spectrum), cap_text(p.max_payload_bytes).c_str(),
                    cap_text(p.max_messages_per_day).c_str(), p.fixed_overhead_s, p.tx_power_w,
                    p.per_message_overhead_j, p.battery_life.c_str());
    return 0;
}

int cmd_validate(const std::string& config_path) {
    try {
        load_config(config_path);
    } catch (const ConfigError& e) {
        print_issues(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << "OK: " << config_path << " is valid\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::filesystem::path& out_dir,
            const std::vector<std::string>& mode_args, bool seed_given, uint64_t seed) {
    Config config;
    std::vector<Mode> modes;
    try {
        nlohmann::json doc = load_raw(config_path);
        if (seed_given && doc.is_object()) {
            // The seed override is folded into the document so the manifest's
            // resolved config reproduces the run as-is.
            doc["simulation"]["seed"] = seed;
            doc["workload"]["seed"] = seed;
        }
        config = parse_config(doc);

        if (mode_args.empty()) {
            // The comparison set of the delay/energy figures.
            modes = {Mode{}, Mode{Technology::NB_IOT}, Mode{Technology::BLE},
                     Mode{Technology::WIFI}, Mode{Technology::LTE}};
        } else {
            for (const auto& arg : mode_args) {
                auto mode = mode_from_string(arg);
                if (!mode) throw ConfigError({"--mode: expected hybrid or fixed:<TECH>, got \"" + arg + "\""});
                if (!mode->hybrid() && !config.scenario.registry.index_of(*mode->fixed))
                    throw ConfigError({"--mode: technology not in registry: " + arg});
                modes.push_back(*mode);
            }
        }
    } catch (const ConfigError& e) {
        print_issues(e);
        return 1;
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    ComparisonResult comparison = compare_modes(config.scenario, modes);

    // Stage every output, then write temp files and rename; a failed run
    // must not leave partial files behind.
    std::vector<std::pair<std::string, std::string>> files;
    for (size_t i = 0; i < modes.size(); ++i) {
        const std::string tag = mode_file_tag(modes[i]);
        files.emplace_back("metrics_" + tag + ".csv", metrics_to_csv(comparison.runs[i], modes[i]));
        if (modes[i].hybrid()) {
            if (config.output.decisions)
                files.emplace_back("decisions_" + tag + ".csv",
                                   decisions_to_csv(comparison.runs[i].decisions));
            if (config.output.dataset)
                files.emplace_back("dataset_" + tag + ".jsonl",
                                   dataset_to_jsonl(comparison.runs[i].final_dataset));
        }
    }
    files.emplace_back("comparison.csv", comparison_to_csv(comparison.table));
    if (config.output.charts) {
        files.emplace_back("delay_vs_volume.svg", delay_chart_svg(comparison.table));
        files.emplace_back("energy_vs_volume.svg", energy_chart_svg(comparison.table));
    }

    nlohmann::ordered_json manifest;
    manifest["tool"] = "clpwan";
    manifest["config_hash"] = "fnv1a64:" + hex64(fnv1a64(config.resolved.dump()));
    manifest["seed"] = config.scenario.seed;
    nlohmann::ordered_json mode_names = nlohmann::ordered_json::array();
    for (const auto& m : modes) mode_names.push_back(to_string(m));
    manifest["modes"] = mode_names;
    nlohmann::ordered_json file_names = nlohmann::ordered_json::array();
    for (const auto& [name, content] : files) file_names.push_back(name);
    file_names.push_back("manifest.json");
    manifest["files"] = file_names;
    manifest["config"] = config.resolved;
    files.emplace_back("manifest.json", manifest.dump(2) + "\n");

    std::vector<std::filesystem::path> temps;
    std::vector<std::filesystem::path> renamed;
    try {
        std::filesystem::create_directories(out_dir);
        for (const auto& [name, content] : files) {
            const auto tmp = out_dir / (name + ".tmp");
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write " + tmp.string());
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            if (!out) throw std::runtime_error("short write to " + tmp.string());
            out.close();
            temps.push_back(tmp);
        }
        for (size_t i = 0; i < files.size(); ++i) {
            std::filesystem::rename(temps[i], out_dir / files[i].first);
            renamed.push_back(out_dir / files[i].first);
        }
    } catch (const std::exception& e) {
        std::error_code ec;
        for (const auto& tmp : temps) std::filesystem::remove(tmp, ec);
        for (const auto& done : renamed) std::filesystem::remove(done, ec);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    for (const auto& row : comparison.table.rows)
        std::printf("%-12s requests=%zu infeasible=%zu mean_delay_s=%s total_energy_j=%s\n",
                    to_string(row.mode).c_str(), row.requests, row.infeasible,
                    fmt_g(row.mean_delay_s).c_str(), fmt_g(row.total_energy_j).c_str());
    std::printf("wrote %zu files to %s\n", files.size(), out_dir.string().c_str());
    return 0;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Hybrid LPWA network simulator with entropy-gated technology selection"};
    app.require_subcommand(1);

    std::string config_path;
    std::string format = "text";
    auto* list = app.add_subcommand("list-technologies", "Print the technology registry");
    list->add_option("--config", config_path, "Scenario configuration with overrides");
    list->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Validate a scenario configuration");
    validate->add_option("--config", validate_path, "Configuration file")->required();

    std::string run_path;
    std::string out_dir = "out";
    std::vector<std::string> mode_args;
    uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Run the experiment and write results");
    run->add_option("--config", run_path, "Configuration file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--mode", mode_args, "hybrid or fixed:<TECH> (repeatable)");
    auto* seed_opt = run->add_option("--seed", seed, "Override the configured seeds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (list->parsed()) return cmd_list_technologies(config_path, format);
    if (validate->parsed()) return cmd_validate(validate_path);
    return cmd_run(run_path, out_dir, mode_args, seed_opt->count() > 0, seed);
}

} // namespace clpwan
