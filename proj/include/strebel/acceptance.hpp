#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strebel/strebel.hpp"

namespace strebel {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::optional<double> length_budget;  ///< overrides the trace budget everywhere
  bool perturb_q1 = false;              ///< negative control: numerator z^2 - z + 1.1
  Exec exec = Exec::Parallel;
  std::vector<int> only;                ///< empty runs all criteria
};

int acceptance_count();

/// Runs the checks in order; on_result is called as each finishes.
/// Exceptions inside a check count as failure with the message as detail.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  6 q1 periods (0.84 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace strebel
