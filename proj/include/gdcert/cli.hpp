#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gdcert::cli {

enum ExitCode : int {
  kOk = 0,
  kCriterionFailed = 1,  // criterion fails, a monitor went red, or the target was missed
  kConfigError = 2,
  kDivergence = 3,
  kDataDegeneracy = 4,
};

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"certify", "--config", "run.json", "--out", "results"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gdcert::cli
