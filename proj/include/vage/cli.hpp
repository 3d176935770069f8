#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vage::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitGateFailed = 2;

/// Entry point behind the `vage` executable. `args` excludes the program
/// name. Subcommands: analytic, simulate, verify, sweep.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `1..6` or a comma list; entries may be fractions such as `1/3`.
std::vector<double> parse_value_list(const std::string& text);

} // namespace vage::cli
