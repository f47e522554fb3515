#pragma once

// Command dispatch: solve | vv-rate | cont-dep | lemma-check | holder | probe.
// Exit codes: 0 pass, 1 check failure, 2 configuration error, 3 nonconvergence.

#include "visclab/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace visclab {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNonconvergence = 3 };

extern const std::vector<std::string> kCommands;

/// Runs one study for a parsed config; writes the report under config.output.
Report run_study(const std::string& command, const Config& config);

/// Loads the config, applies overrides, runs, writes artifacts and prints a
/// one-line verdict. Never throws.
int dispatch(const std::string& command, const std::string& config_path, std::optional<std::uint64_t> seed,
             std::optional<std::string> out_dir, std::ostream& out, std::ostream& err);

}  // namespace visclab
