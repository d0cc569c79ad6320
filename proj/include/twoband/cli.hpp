#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace twoband::cli {

struct RunConfig {
  int grid_n = 256;
  double tol_sym = 1e-9;
  double tol_gap = 1e-9;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // gapless, constraint violated, verification FAIL, ...
inline constexpr int kUsage = 2;    // bad arguments or unreadable input

/// `args` excludes the program name. Output is key=value lines on `out`,
/// diagnostics on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twoband::cli
