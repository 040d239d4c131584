#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mhpc {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Runs one `mhpc` subcommand (generate, consolidate, baseline, evaluate).
/// `args` excludes the program name. Returns the process exit status; errors
/// are reported on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhpc
