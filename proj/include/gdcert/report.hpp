#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdcert/core.hpp"

namespace gdcert {

/// Verdicts for one trace step. Checks that do not apply to the step (for
/// example the distance check on the final iterate) are left empty.
struct StepCheck {
  std::optional<bool> ball_ok;
  std::optional<bool> rate_ok;
  std::optional<bool> distance_ok;
  std::optional<bool> residual_ok;
  std::optional<bool> decrease_ok;
  std::optional<double> residual;
};

/// Outcome of checking a trace against a certificate. The checks only
/// report; a violated bound never throws.
struct BoundReport {
  std::vector<StepCheck> steps;
  std::vector<MonitorVerdict> summary;

  bool all_passed() const;
  /// Null when no check of that name ran.
  const MonitorVerdict* find(const std::string& name) const;
};

/// Running min-slack accumulator for one named check.
class VerdictAccumulator {
 public:
  explicit VerdictAccumulator(std::string name) { verdict_.name = std::move(name); }

  /// Records bound - measured >= -tolerance as a pass.
  bool record(double measured, double bound, double tolerance);
  const MonitorVerdict& verdict() const { return verdict_; }
  bool used() const { return used_; }

 private:
  MonitorVerdict verdict_;
  bool used_ = false;
};

}  // namespace gdcert
