#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace riskgroups {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitGridFailure = 3 };

// Environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "RISKGROUPS_THREADS";

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  // Output directory for generate/optimize/cv; the run directory for report.
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool quiet = false;
};

// Flag, then environment, then config file, then the OpenMP default.
int resolve_threads(std::optional<int> flag, int config_threads);

// Each command throws on failure; run_command maps exceptions to exit codes
// and prints the message to `err`.
int cmd_generate(const CommandOptions& options, std::ostream& log);
int cmd_optimize(const CommandOptions& options, std::ostream& log);
int cmd_cv(const CommandOptions& options, std::ostream& log);
int cmd_report(const CommandOptions& options, std::ostream& log);

int run_command(std::string_view name, const CommandOptions& options, std::ostream& log, std::ostream& err);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace riskgroups
