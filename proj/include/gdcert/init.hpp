#pragma once

#include <cstdint>
#include <vector>

#include "gdcert/network.hpp"

namespace gdcert {

/// W_1 = 0, every bias 0, entries of W_2..W_{L-1} uniform in [delta, K],
/// entries of W_L all equal to A. The network output is identically 0, so
/// the loss equals (1/n) sum y_i^2 for any dataset.
NetworkParams theorem3_init(const NetworkArchitecture& arch, double delta, double K,
                            double A, std::uint64_t seed);

/// Biases 0; entries of W_l i.i.d. N(0, c / d_{l-1}) from the counter-based
/// normal stream seeded with `seed`, drawn in flat-layout order.
NetworkParams lecun_init(const NetworkArchitecture& arch, double c, std::uint64_t seed);

struct TrialOutcome {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double final_S = 0.0;
  std::size_t iterations = 0;
  bool success = false;
};

struct ThetaEstimate {
  double theta_hat = 0.0;
  double ci_low = 0.0;   // 95% Clopper-Pearson
  double ci_high = 1.0;
  std::size_t successes = 0;
  std::vector<TrialOutcome> outcomes;
};

/// Exact two-sided Clopper-Pearson interval for k successes out of n.
std::pair<double, double> clopper_pearson(std::size_t successes, std::size_t trials,
                                          double confidence = 0.95);

/// Runs `trials` independent LeCun initializations, each followed by fixed
/// step descent (step eta, at most `budget` iterations, stopping once
/// S <= tol). A trial succeeds when the final S < tol; a diverging trial
/// counts as a failure. Trial t uses seed derive_seed(seed, "lecun-trial", t).
ThetaEstimate estimate_theta(const NetworkArchitecture& arch, const Dataset& data,
                             double c, std::size_t trials, double eta,
                             std::size_t budget, double tol, std::uint64_t seed);

}  // namespace gdcert
