#pragma once

#include <string>
#include <vector>

namespace rover {

struct GradCheckResult {
  std::string name;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Finite-difference validation of every analytic gradient path: raw network
// backprop, critic regression loss, reparameterized actor objective,
// deterministic-actor objective, and the temperature dual. Deterministic.
// `inject_fault` deliberately corrupts one gradient to prove the suite can
// fail.
std::vector<GradCheckResult> run_gradient_checks(bool inject_fault = false);

bool all_passed(const std::vector<GradCheckResult>& results);

}  // namespace rover
