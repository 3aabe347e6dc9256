#pragma once
/// @file cli.hpp
/// @brief Command-line front end.
///
/// Subcommands: golden, analyze, simulate, sweep, roofline, compare.
/// Exit codes: 0 success; 1 semantic mismatch or dataflow deadlock;
/// 2 usage, parameter, validation, io, or protocol errors.

#include <string>
#include <vector>

#include "stencilfab/errors.hpp"

namespace stencilfab {

/// Maps an error kind onto the tool's exit code (1 or 2, see above).
int exit_code_for(ErrorKind kind);

/// Runs the tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args);

} // namespace stencilfab
