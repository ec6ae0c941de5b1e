#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netinfer::cli {

constexpr int kExitOk = 0;
constexpr int kExitMethodFailure = 1;
constexpr int kExitUsage = 2;

/// Runs `netinfer <subcommand> ...`; args exclude the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace netinfer::cli
