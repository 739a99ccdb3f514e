// Runs every acceptance criterion and prints one line per criterion.
// Exit status is 0 only when all of them pass.

#include <cstdio>

#include "lgasym/validation.hpp"

int main() {
  bool all = true;
  for (const lgasym::CriterionResult& r : lgasym::run_suites("all")) {
    all = all && r.pass;
    std::printf("criterion %2d %s: %s (measured %.10g, tolerance %.3g, %.2fs)\n", r.id, r.pass ? "PASS" : "FAIL",
                r.title.c_str(), r.measured, r.tolerance, r.seconds);
    std::printf("    %s\n", r.detail.c_str());
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
