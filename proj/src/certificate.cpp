#include "gdcert/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gdcert/rng.hpp"

namespace gdcert {

std::string to_string(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::analytic: return "analytic";
    case AlphaKind::sampled: return "sampled";
    case AlphaKind::grid_oracle: return "grid-oracle";
  }
  return "unknown";
}

std::string to_string(BoundMode mode) {
  return mode == BoundMode::analytic ? "analytic" : "sampled";
}

AlphaKind alpha_kind_from_string(const std::string& s) {
  if (s == "analytic") return AlphaKind::analytic;
  if (s == "sampled") return AlphaKind::sampled;
  if (s == "grid-oracle") return AlphaKind::grid_oracle;
  throw InputError("unknown alpha kind '" + s + "'");
}

BoundMode bound_mode_from_string(const std::string& s) {
  if (s == "analytic") return BoundMode::analytic;
  if (s == "sampled") return BoundMode::sampled;
  throw InputError("unknown bound mode '" + s + "'");
}

AlphaEstimate AlphaEstimate::analytic(double value) {
  if (!(value > 0.0)) throw InputError("alpha must be positive");
  return {value, AlphaKind::analytic, 0};
}

AlphaEstimate alpha_sampled(const ObjectiveFunction& f, const Ball& ball,
                            std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw InputError("alpha_sampled: n_samples must be >= 1");
  if (f.dim() != ball.dim()) throw InputError("alpha_sampled: dimension mismatch");
  CounterRng rng(derive_seed(seed, "alpha-sampled"));
  double best = kInf;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const RealVector x = sample_in_ball(ball, rng);
    const double fx = f(x);
    if (fx <= kZeroLoss) continue;
    const double g = euclidean_norm(f.gradient(x));
    best = std::min(best, g * g / fx);
  }
  return {best, AlphaKind::sampled, n_samples};
}

CriterionCheck check_criterion(double f_x0, double r, const AlphaEstimate& alpha) {
  if (!(r > 0.0)) throw InputError("check_criterion: r must be positive");
  if (!(f_x0 >= 0.0) || !std::isfinite(f_x0)) {
    throw InputError("check_criterion: f(x0) must be finite and nonnegative");
  }
  if (!(alpha.value > 0.0)) throw InputError("check_criterion: alpha must be positive");
  CriterionCheck out;
  if (alpha.infinite()) {
    out.holds = true;
    out.slack = kInf;
    out.relative_margin = 1.0;
    return out;
  }
  const double capacity = r * r * alpha.value;
  out.slack = capacity - 4.0 * f_x0;
  out.holds = 4.0 * f_x0 < capacity;
  out.relative_margin = out.slack / capacity;
  return out;
}

double choose_epsilon(double f_x0, double r, double alpha, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InputError("choose_epsilon: fraction must lie in (0, 1)");
  }
  const auto check = check_criterion(f_x0, r, AlphaEstimate{alpha, AlphaKind::analytic, 0});
  if (!check.holds) {
    throw PreconditionError("choose_epsilon: the convergence criterion does not hold");
  }
  const double rho = alpha == kInf ? 0.0 : 2.0 * std::sqrt(f_x0 / alpha) / r;
  constexpr double kLo = 1e-6;
  constexpr double kHi = 1.0 - 1e-6;
  return std::clamp(fraction * (1.0 - rho), kLo, kHi);
}

double choose_step_size(double r, std::size_t p, double L1, double L2,
                        double epsilon) {
  if (!(r > 0.0) || p == 0 || !(L1 > 0.0) || !(L2 > 0.0) || !(epsilon > 0.0)) {
    throw InputError("choose_step_size: all inputs must be positive");
  }
  const double pd = static_cast<double>(p);
  return std::min(r / (L1 * std::sqrt(pd)), 2.0 * epsilon / (L2 * pd));
}

DerivativeBounds estimate_derivative_bounds(const ObjectiveFunction& f,
                                            const Ball& ball,
                                            std::uint64_t seed) {
  const std::size_t p = ball.dim();
  if (f.dim() != p) throw InputError("estimate_derivative_bounds: dimension mismatch");
  const std::size_t samples = 10 * p;
  constexpr double kSafety = 1.5;
  constexpr double kStep = 1e-5;

  CounterRng rng1(derive_seed(seed, "lipschitz-L1"));
  double l1 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const RealVector x = sample_in_ball(ball, rng1);
    for (double g : f.gradient(x)) l1 = std::max(l1, std::abs(g));
  }

  const Ball wide(ball.center(), 2.0 * ball.radius());
  CounterRng rng2(derive_seed(seed, "lipschitz-L2"));
  double l2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    RealVector x = sample_in_ball(wide, rng2);
    for (std::size_t j = 0; j < p; ++j) {
      const double xj = x[j];
      x[j] = xj + kStep;
      const RealVector gp = f.gradient(x);
      x[j] = xj - kStep;
      const RealVector gm = f.gradient(x);
      x[j] = xj;
      for (std::size_t i = 0; i < p; ++i) {
        l2 = std::max(l2, std::abs(gp[i] - gm[i]) / (2.0 * kStep));
      }
    }
  }
  // A flat region would give a zero bound; the step-size rule needs L > 0.
  constexpr double kFloor = 1e-12;
  return {std::max(kSafety * l1, kFloor), std::max(kSafety * l2, kFloor),
          BoundMode::sampled};
}

std::string Certificate::validate() const {
  std::ostringstream err;
  if (!(radius > 0.0)) return "radius must be positive";
  if (!(f_x0 >= 0.0)) return "f(x0) must be nonnegative";
  if (!(alpha.value > 0.0)) return "alpha must be positive";
  if (!(epsilon > 0.0 && epsilon < 1.0)) return "epsilon must lie in (0, 1)";
  if (!(L1 > 0.0) || !(L2 > 0.0)) return "L1 and L2 must be positive";
  if (!(eta > 0.0)) return "eta must be positive";
  const double r2a = radius * radius * alpha.value;
  if (!alpha.infinite()) {
    if (!(4.0 * f_x0 < r2a)) return "criterion 4 f(x0) < r^2 alpha violated";
    const double one_minus = 1.0 - epsilon;
    if (!(4.0 * f_x0 < one_minus * one_minus * r2a)) {
      return "epsilon condition 4 f(x0) < (1 - eps)^2 r^2 alpha violated";
    }
  }
  const double cap = choose_step_size(radius, dim(), L1, L2, epsilon);
  if (eta > cap) {
    err << "eta " << eta << " exceeds the certified cap " << cap;
    return err.str();
  }
  const double expect_delta = std::min(1.0, (1.0 - epsilon) * alpha.value * eta);
  if (delta != expect_delta) return "delta != min{1, (1 - eps) alpha eta}";
  return {};
}

Certificate build_certificate(double f_x0, const Ball& ball,
                              const AlphaEstimate& alpha,
                              const DerivativeBounds& bounds,
                              double epsilon_fraction) {
  const auto check = check_criterion(f_x0, ball.radius(), alpha);
  if (!check.holds) {
    std::ostringstream msg;
    msg << "convergence criterion fails: 4 f(x0) = " << 4.0 * f_x0
        << " is not below r^2 alpha (slack " << check.slack << ")";
    throw CertificationError(msg.str(), check.slack);
  }
  Certificate cert;
  cert.center = ball.center();
  cert.radius = ball.radius();
  cert.f_x0 = f_x0;
  cert.alpha = alpha;
  cert.epsilon = choose_epsilon(f_x0, ball.radius(), alpha.value, epsilon_fraction);
  cert.L1 = bounds.L1;
  cert.L2 = bounds.L2;
  cert.lipschitz_mode = bounds.mode;
  cert.eta = choose_step_size(ball.radius(), ball.dim(), bounds.L1, bounds.L2,
                              cert.epsilon);
  cert.delta = std::min(1.0, (1.0 - cert.epsilon) * alpha.value * cert.eta);
  if (auto problem = cert.validate(); !problem.empty()) {
    throw CertificationError("certificate invalid: " + problem, check.slack);
  }
  return cert;
}

Certificate build_certificate(const ObjectiveFunction& f, const Ball& ball,
                              const AlphaEstimate& alpha, double L1, double L2,
                              BoundMode mode, double epsilon_fraction) {
  if (f.dim() != ball.dim()) throw InputError("build_certificate: dimension mismatch");
  return build_certificate(f(ball.center()), ball, alpha, DerivativeBounds{L1, L2, mode},
                           epsilon_fraction);
}

}  // namespace gdcert
