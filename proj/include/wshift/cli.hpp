#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wshift/error.hpp"

namespace wshift::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Process exit codes. Anything not listed below that the library throws is
/// reported as EngineFailure.
enum class ExitCode : int {
  Ok = 0,
  Usage = 1,
  ParseError = 2,
  InvalidConfig = 3,
  MissingParameter = 4,
  EngineFailure = 5,
  IoError = 6,
  LengthMismatch = 7,
};

ExitCode exit_code_for(Errc code) noexcept;

/// Runs one command line (without the program name). Subcommands: generate,
/// ingest, cluster, eval, bench, replay. Errors are printed to `err` as one
/// JSON object and also written to `<out>/error.json` when an output
/// directory was given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wshift::cli
