#include "gdcert/init.hpp"

#include <boost/math/distributions/beta.hpp>
#include <cmath>

#include "gdcert/descent.hpp"
#include "gdcert/rng.hpp"

namespace gdcert {

NetworkParams theorem3_init(const NetworkArchitecture& arch, double delta, double K,
                            double A, std::uint64_t seed) {
  if (!(delta > 0.0) || !(K >= delta) || !std::isfinite(K)) {
    throw InputError("theorem3_init: need 0 < delta <= K");
  }
  if (!(A >= delta) || !std::isfinite(A)) throw InputError("theorem3_init: need A >= delta");
  NetworkParams params = NetworkParams::zeros(arch);
  CounterRng rng(derive_seed(seed, "theorem3-middle"));
  const std::size_t L = arch.depth();
  for (std::size_t l = 2; l < L; ++l) {
    const std::size_t count = arch.width(l) * arch.width(l - 1);
    double* W = params.flat.data() + arch.weight_offset(l);
    for (std::size_t k = 0; k < count; ++k) {
      W[k] = delta == K ? delta : std::min(K, rng.uniform(delta, K));
    }
  }
  double* WL = params.flat.data() + arch.weight_offset(L);
  for (std::size_t k = 0; k < arch.width(L - 1); ++k) WL[k] = A;
  return params;
}

NetworkParams lecun_init(const NetworkArchitecture& arch, double c, std::uint64_t seed) {
  if (!(c > 0.0)) throw InputError("lecun_init: c must be positive");
  NetworkParams params = NetworkParams::zeros(arch);
  CounterRng rng(derive_seed(seed, "lecun"));
  for (std::size_t l = 1; l <= arch.depth(); ++l) {
    const double stddev = std::sqrt(c / static_cast<double>(arch.width(l - 1)));
    const std::size_t count = arch.width(l) * arch.width(l - 1);
    double* W = params.flat.data() + arch.weight_offset(l);
    for (std::size_t k = 0; k < count; ++k) W[k] = rng.normal(0.0, stddev);
  }
  return params;
}

std::pair<double, double> clopper_pearson(std::size_t successes, std::size_t trials,
                                          double confidence) {
  if (trials == 0) throw InputError("clopper_pearson: trials must be >= 1");
  if (successes > trials) throw InputError("clopper_pearson: successes > trials");
  const double tail = 0.5 * (1.0 - confidence);
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  double lo = 0.0, hi = 1.0;
  if (successes > 0) {
    lo = boost::math::quantile(boost::math::beta_distribution<double>(k, n - k + 1.0), tail);
  }
  if (successes < trials) {
    hi = boost::math::quantile(boost::math::beta_distribution<double>(k + 1.0, n - k),
                               1.0 - tail);
  }
  return {lo, hi};
}

ThetaEstimate estimate_theta(const NetworkArchitecture& arch, const Dataset& data,
                             double c, std::size_t trials, double eta,
                             std::size_t budget, double tol, std::uint64_t seed) {
  if (trials == 0) throw InputError("estimate_theta: trials must be >= 1");
  if (budget == 0) throw InputError("estimate_theta: budget must be >= 1");
  const ObjectiveFunction S = network_objective(arch, data);

  ThetaEstimate est;
  for (std::size_t t = 0; t < trials; ++t) {
    TrialOutcome out;
    out.trial = t;
    out.seed = derive_seed(seed, "lecun-trial", t);
    const NetworkParams w0 = lecun_init(arch, c, out.seed);
    DescentConfig cfg;
    cfg.eta = eta;
    cfg.max_iter = budget;
    cfg.stop_f_tol = tol;
    // Only the endpoint matters here.
    cfg.point_stride = budget + 1;
    try {
      const Trace trace = run_descent(S, w0.flat, cfg);
      out.final_S = trace.steps.back().f;
      out.iterations = trace.steps.size() - 1;
      out.success = out.final_S < tol;
    } catch (const DivergenceError& e) {
      out.final_S = kInf;
      out.iterations = e.last_good_step();
      out.success = false;
    }
    if (out.success) ++est.successes;
    est.outcomes.push_back(out);
  }
  est.theta_hat = static_cast<double>(est.successes) / static_cast<double>(trials);
  std::tie(est.ci_low, est.ci_high) = clopper_pearson(est.successes, trials);
  return est;
}

}  // namespace gdcert
