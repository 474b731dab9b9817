// Acceptance suite runner: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <iostream>

#include "selberg/selftest.hpp"

int main() {
  selberg::SelftestOptions o;
  o.on_result = [](const selberg::CriterionResult& c) { std::cout << selberg::format_criterion(c) << std::endl; };
  const auto results = selberg::run_acceptance(o);
  int failed = 0;
  for (const auto& r : results) failed += (!r.passed && !r.stretch_unconverged);
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria satisfied\n";
  return failed ? 1 : 0;
}
