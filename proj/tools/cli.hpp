// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lexpand::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kData = 2 };

/// Runs one command line (without the program name). Errors are written to
/// `err` as single-line JSON records.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lexpand::cli
