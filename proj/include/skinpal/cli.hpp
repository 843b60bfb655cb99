#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "skinpal/config.hpp"

namespace skinpal {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFatal = 1, kExitPartial = 2 };

int cmd_analyze(const RunConfig& config, unsigned jobs, std::ostream& out, std::ostream& err);
int cmd_compare(const std::vector<std::filesystem::path>& palette_paths, const std::filesystem::path& out_csv,
                std::ostream& out, std::ostream& err);
int cmd_gamut(const std::filesystem::path& palette_path, const std::filesystem::path& refsys_path, double epsilon,
              std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches to a subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skinpal
