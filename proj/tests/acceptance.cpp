// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "strebel/acceptance.hpp"

int main(int argc, char** argv) {
  strebel::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  const auto results = strebel::run_acceptance(opt, [&](const strebel::CriterionResult& r) {
    std::printf("%s\n", strebel::format_result(r).c_str());
    std::fflush(stdout);
    failed += !r.pass;
  });
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
