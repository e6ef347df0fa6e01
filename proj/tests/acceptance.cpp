// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <cstdio>

#include "gfbm/validation.hpp"

int main() {
  gfbm::SuiteOptions options;
  int failures = 0;
  gfbm::run_suite(options, [&](const gfbm::CheckResult& r) {
    if (!r.passed) ++failures;
    std::printf("[%s] %2d %-22s measured=%-12.6g tol=%-8.3g %7.2fs  %s\n",
                r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured, r.tolerance,
                r.seconds, r.property.c_str());
    if (!r.detail.empty()) std::printf("       %s\n", r.detail.c_str());
    std::fflush(stdout);
  });
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
