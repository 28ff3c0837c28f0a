// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace femtocap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args[0] is the program name). Subcommands: allocate,
/// cap, simulate, validate-qos.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace femtocap::cli
