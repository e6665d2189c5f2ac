#include "skyrmion/config.hpp"
#include "skyrmion/validation.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace skyrmion;

int main(int argc, char **argv) {
  const ExperimentConfig defaults;
  AcceptanceSuite suite(defaults.suite, defaults.solver, defaults.seed);
  const ValidationReport report = suite.run_all([](const CriterionResult &c) {
    std::printf("criterion %d %s  %s  (%.1f s)\n", c.id, c.passed() ? "PASS" : "FAIL", c.title.c_str(), c.seconds);
    for (const CheckRecord &r : c.records) {
      if (!r.pass) {
        std::printf("    failed: %s predicted=%s measured=%s tol=%s %s\n", r.name.c_str(),
                    format_number(r.predicted).c_str(), format_number(r.measured).c_str(),
                    format_number(r.tolerance).c_str(), r.detail.c_str());
      }
    }
    if (!c.error.empty()) {
      std::printf("    error: %s\n", c.error.c_str());
    }
    std::fflush(stdout);
  });
  if (argc > 1) {
    std::ofstream csv(argv[1]);
    report.write_csv(csv);
  }
  std::printf("acceptance %s\n", report.passed() ? "PASS" : "FAIL");
  return report.passed() ? 0 : 1;
}
