#pragma once

// Command-line front end. Every subcommand is a thin adapter over the library.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bachvol::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kBatchFailed = 3,
  kNumerical = 4,
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
EnvLookup process_environment();

/// Runs one invocation. `args` excludes the program name. Normal output goes
/// to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env);

}  // namespace bachvol::cli
