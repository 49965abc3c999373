#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sandwich/io.hpp"

namespace sandwich {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInputError = 2 };

/// Command-line overrides shared by all verbs.
struct RunOptions {
  std::optional<std::size_t> sample_size;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<Rational> tol;
  std::optional<EngineMode> mode;
  std::optional<Feasibility> feasibility;
  bool timing = false;
};

struct CommandOutcome {
  int exit_code = kExitOk;
  nlohmann::json report;
};

/// `verb` is one of check-preorder, sandwich, extend, envelope, probe,
/// "comono decompose", "comono approx", "comono choquet", "comono envelope".
/// Throws InputError for inputs the verb cannot use.
CommandOutcome run_command(const std::string& verb, const InstanceFile& instance, const RunOptions& options);

/// Finds a file as given, then under $SANDWICH_FIXTURES, then under the
/// bundled fixture directory; ".json" is appended when missing.
std::string resolve_instance_path(const std::string& name);

/// The full command-line program. Reports go to `out` (or --out), messages
/// to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sandwich
