#pragma once

#include <string>

#include "sympla/types.hpp"

namespace sympla {

// Exit codes shared by the library entry point and the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchemaError = 2;
inline constexpr int kExitNumericalError = 3;

struct JobOptions {
  Tolerances tol;
  bool no_meta = false;  // omit the volatile meta block for reproducible output
};

struct JobOutcome {
  int exit_code = kExitOk;
  std::string report;  // JSON text, newline-terminated
};

// Runs one toolkit command on a JSON input document and produces the report.
// Commands: maslov, triangular, maslov-type, splitting, iterate, mod2, morse,
// relations. Schema violations return kExitSchemaError, numerical failures
// kExitNumericalError; in both cases the report carries an "error" object.
JobOutcome runJob(const std::string& command, const std::string& input_text,
                  const JobOptions& opt = {});

}  // namespace sympla
