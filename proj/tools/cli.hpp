#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lorcap/json_io.hpp"

namespace lorcap::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kVerification = 3 };

struct Outcome {
  int exit = kOk;
  std::string command;
  io::Json report;     ///< empty on validation failure
  std::string error;   ///< message for exit code 2
};

/// Runs one subcommand (everything except `batch`). Relative input paths are
/// resolved against base_dir.
Outcome execute(const std::vector<std::string>& args, const std::filesystem::path& base_dir = {});

/// Full front end: parses args (without the program name), writes the report
/// to out and diagnostics to err, returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lorcap::cli
