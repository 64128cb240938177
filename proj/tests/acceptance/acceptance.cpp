// Acceptance suite: prints one PASS/FAIL line per criterion, exits nonzero on any FAIL.
//   acceptance [--threads N] [--strict] [ids...]

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "deltanls/verify.hpp"

int main(int argc, char** argv) {
  using namespace deltanls::verify;
  unsigned threads = 1;
  Profile profile = Profile::Default;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) {
      threads = static_cast<unsigned>(std::atoi(argv[++i]));
    } else if (!std::strcmp(argv[i], "--strict")) {
      profile = Profile::Strict;
    } else {
      ids.push_back(std::atoi(argv[i]));
    }
  }
  const auto results = run_acceptance(ids, profile, threads, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
