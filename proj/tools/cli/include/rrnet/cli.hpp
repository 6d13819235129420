#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rrnet {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kAuditFailure = 3,
  kSolverFailure = 4,
};

/// Runs the rrnet command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs an experiment config (JSON text) and returns the CSV document.
/// Invalid configs throw reluriesz::ValidationError naming the offending field.
std::string run_experiment(const std::string& config_text, std::optional<unsigned> threads = std::nullopt);

}  // namespace rrnet
