#pragma once

// The plaplab subcommands. Each returns a JSON report and an exit code;
// file outputs go under output.dir.

#include <exception>
#include <string>
#include <vector>

#include "config.hpp"
#include "io.hpp"

namespace plaplab {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitMath = 3,
  kExitInternal = 4,
};

struct CommandOutput {
  Json report;
  int exit_code = kExitOk;
};

struct RunOptions {
  int jobs = 1;
  bool force = false;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"exponents", "solve",     "lambda-star",
                                                 "bifurcate", "stability", "verify",
                                                 "sweep"};
  return names;
}

/// Maps an exception to its exit code and fills `type`/`message`.
int classify_exception(const std::exception_ptr& error, std::string& type, std::string& message);

/// Runs one command; never throws. Library errors become an error report
/// with the mapped exit code.
CommandOutput run_command(const std::string& command, const RunConfig& config,
                          const RunOptions& options = {});

}  // namespace plaplab
