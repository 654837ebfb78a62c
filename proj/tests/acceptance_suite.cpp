// End-to-end acceptance run: every criterion at its stated tolerance, one
// pass/fail line per criterion. The build-time AVX2 kernel is used when the
// host supports it; two worker threads drive the cusp sum.

#include <cstdio>

#include "pforms/acceptance.hpp"
#include "pforms/kernels.hpp"

int main() {
  pforms::AcceptanceOptions opt;
  opt.threads = 2;
  opt.kernel = "auto";
  auto checks = pforms::run_acceptance(opt);
  bool all = true;
  for (const auto& c : checks) {
    std::printf("%s %-26s %7.2fs  residual=%.3e  %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.seconds, c.residual, c.details.c_str());
    all = all && c.pass;
  }
  std::printf("%s\n", all ? "ACCEPTANCE: all criteria pass" : "ACCEPTANCE: FAILURES PRESENT");
  return all ? 0 : 1;
}
