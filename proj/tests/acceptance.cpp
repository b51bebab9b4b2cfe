// Acceptance suite: runs every criterion of the reference reproduction table
// at its pinned tolerance and prints one line per check.
//
//   acceptance               all criteria
//   acceptance 2 4           selected criteria

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bloch/reference.hpp"

namespace {

void print(const bloch::CriterionResult& res, double seconds) {
  for (const auto& c : res.checks) {
    std::printf("  [%s] %-58s value=%.9g", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value);
    if (c.tolerance > 0.0) {
      std::printf(" expected=%.9g %s%.3g", c.expected, c.relative ? "rel+-" : "+-", c.tolerance);
    }
    if (!c.detail.empty()) std::printf(" (%s)", c.detail.c_str());
    std::printf("\n");
  }
  std::printf("%s criterion %d: %s  [%.1fs]\n", res.pass() ? "PASS" : "FAIL", res.id, res.title.c_str(), seconds);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) {
    for (int id = 1; id <= bloch::kCriterionCount; ++id) ids.push_back(id);
  }
  bool all = true;
  for (int id : ids) {
    const auto start = std::chrono::steady_clock::now();
    const auto res = bloch::run_criterion(id);
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    print(res, took.count());
    all = all && res.pass();
  }
  return all ? 0 : 1;
}
