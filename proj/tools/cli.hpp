#pragma once

// Command-line front end: run, search, verify and export subcommands.

namespace coverage::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kInputError = 2,
  kRuntimeFailure = 3,
};

/// Parses argv and dispatches. Never throws; returns one of ExitCode.
int run(int argc, char** argv);

}  // namespace coverage::cli
