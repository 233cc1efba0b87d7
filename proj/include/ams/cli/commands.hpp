#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ams/io/config.hpp"

namespace ams::cli {

/// Command-line overrides applied on top of the configuration file.
struct Overrides {
  std::string configPath;  // empty: defaults only
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
};

/// Loads, overrides and validates; the result is what the manifest records.
io::Json prepare_config(const Overrides& overrides);

// Each command writes its files and manifest.json into the output directory
// and returns the process exit code. Module errors propagate as exceptions.
int cmd_run_ams(const io::Json& resolved, std::ostream& log);
int cmd_run_dns(const io::Json& resolved, std::ostream& log);
int cmd_committor(const io::Json& resolved, std::ostream& log);
int cmd_ensemble_sweep(const io::Json& resolved, std::ostream& log);
int cmd_three_level(const io::Json& resolved, std::ostream& log);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFlagged = 2;  // run completed but some realizations went extinct
inline constexpr int kExitError = 1;

}  // namespace ams::cli
