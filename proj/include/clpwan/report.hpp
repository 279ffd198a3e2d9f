#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "clpwan/sim.hpp"

namespace clpwan {

// header: t_s,device_id,mode,chosen,delay_s,energy_j,tier,feasible,entropy,admitted
std::string metrics_to_csv(const RunResult& result, const Mode& mode);

// header: decision_id,t_s,device_id,chosen,entropy,admitted
std::string decisions_to_csv(const std::vector<DecisionLogRow>& rows);

// Summary row per mode plus one row per data-volume bucket.
std::string comparison_to_csv(const ComparisonTable& table);

// Log-log line charts over the volume buckets, one polyline per mode.
std::string delay_chart_svg(const ComparisonTable& table);
std::string energy_chart_svg(const ComparisonTable& table);

// Writes content to <path>.tmp and renames over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace clpwan
