#pragma once

// Command-line front end: gen, solve, certify, sweep, plot.
//
// Exit codes are a stable scripting contract:
//   0  success (and, for certify, every gate passed)
//   2  usage error or unreadable / invalid input
//   3  enumeration failure (the failing sign pattern is printed)
//   4  certification gate failure (the report is still written)

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polext/systems.hpp"

namespace polext::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kSolveFailure = 3, kGateFailure = 4 };

struct FamilyParams {
  std::size_t dim = 0;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  double min_angle = 0.0;
};

/// orthonormal[:d], random, random-basis, i2:m, a3, b3, h3, prism:m,
/// sum:<family>+<family>[+...]. Throws SpecError on anything else.
systems::VectorSystem make_family(const std::string& spec, const FamilyParams& params);

/// "a..b" or "a". An empty range (a > b) is allowed.
std::pair<std::size_t, std::size_t> parse_range(const std::string& text);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr const char* kSweepHeader =
    "family,seed,n,d,count,min_S,n_squared,max_absP,n_pow_neg_half_n,ej_residual,wall_ms,status";

}  // namespace polext::cli
