#pragma once

// The acceptance suite: eleven property checks against closed-form solutions and
// high-precision reference values. Shared by the CLI `verify` mode and the ctest binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace deltanls::verify {

enum class Profile {
  Default,  // the acceptance thresholds
  Strict,   // drift-type thresholds tightened tenfold; exact identities unchanged
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured quantities against their thresholds
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 11;

const char* criterion_name(int id);

/// Runs one criterion. Exceptions inside a check are caught and reported as FAIL.
CheckResult run_criterion(int id, Profile profile = Profile::Default, unsigned threads = 1);

/// Runs `ids` in order (all when empty), printing one line per check to `out` as it finishes.
std::vector<CheckResult> run_acceptance(const std::vector<int>& ids, Profile profile, unsigned threads,
                                        std::ostream& out);

/// "PASS  6 exact blow-up tracking: exponent=-0.503 ... (1.2 s)"
std::string format_line(const CheckResult& r);

}  // namespace deltanls::verify
