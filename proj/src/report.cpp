#include "gdcert/report.hpp"

#include <algorithm>

namespace gdcert {

bool BoundReport::all_passed() const {
  return std::all_of(summary.begin(), summary.end(),
                     [](const MonitorVerdict& v) { return v.passed; });
}

const MonitorVerdict* BoundReport::find(const std::string& name) const {
  for (const auto& v : summary) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool VerdictAccumulator::record(double measured, double bound, double tolerance) {
  used_ = true;
  const double slack = bound - measured;
  verdict_.worst_slack = std::min(verdict_.worst_slack, slack);
  const bool ok = slack >= -tolerance;
  if (!ok) {
    verdict_.passed = false;
    ++verdict_.violations;
  }
  return ok;
}

}  // namespace gdcert
