// Runs acceptance criteria 1..11 at their stated tolerances, one line each.
#include <cstdio>

#include "rwrs/verify.hpp"

int main() {
  rwrs::VerifyOptions opts;
  int failed = 0;
  for (int id = 1; id <= 11; ++id) {
    rwrs::CriterionReport r = rwrs::run_criterion(id, opts);
    std::printf("criterion %2d %-32s %s  (%.1fs) %s\n", r.id, r.name.c_str(), r.passed ? "PASS" : "FAIL", r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
