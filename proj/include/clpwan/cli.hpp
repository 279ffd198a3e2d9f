#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace clpwan {

// Exit codes: 0 success, 1 configuration error, 2 I/O failure.
int cmd_list_technologies(const std::string& config_path, const std::string& format);
int cmd_validate(const std::string& config_path);
int cmd_run(const std::string& config_path, const std::filesystem::path& out_dir,
            const std::vector<std::string>& mode_args, bool seed_given, uint64_t seed);

int cli_main(int argc, const char* const* argv);

} // namespace clpwan
