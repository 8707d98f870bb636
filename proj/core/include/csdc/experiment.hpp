#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace csdc {

struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit codes shared by the library runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigInvalid = 1;
inline constexpr int kExitExperimentFailed = 2;

struct RunOptions {
  std::string out_dir = ".";
  unsigned threads = 1;
  std::optional<std::uint64_t> seed_override;
};

// Dispatches one experiment command with a JSON config document.  Commands:
// sweep, fit, member, cross, map, fold, rank, rieck-report.  Writes the
// declared output files plus manifest.json into out_dir and returns an exit
// status.  Configs are schema-checked: unknown keys are rejected and any
// randomized experiment requires a seed.
int run_command(const std::string& command, const std::string& config_json,
                const RunOptions& opts);

const char* version_string();

}  // namespace csdc
