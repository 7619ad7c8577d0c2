#include <gtest/gtest.h>

#include <cmath>

#include "gdcert/certificate.hpp"
#include "gdcert/objectives.hpp"
#include "gdcert/oracle.hpp"
#include "gdcert/rng.hpp"

using namespace gdcert;

namespace {

ObjectiveFunction zero_objective(std::size_t p) {
  return ObjectiveFunction(
      "zero", p, [](std::span<const double>) { return 0.0; },
      [p](std::span<const double>) { return RealVector(p, 0.0); });
}

// Functions whose ratio |grad f|^2 / f attains its infimum at a grid point of
// any ball (an endpoint, the boundary extreme along one axis, or everywhere).
ObjectiveFunction exp_neg2() {
  return ObjectiveFunction(
      "exp(-2x)", 1, [](std::span<const double> x) { return std::exp(-2 * x[0]); },
      [](std::span<const double> x) { return RealVector{-2 * std::exp(-2 * x[0])}; });
}

// e^{s x_k} in 2-D: the ratio s^2 e^{s x_k} is minimized at an axis extreme
// of the ball, which is a grid point for odd resolutions.
ObjectiveFunction exp_axis(std::size_t k, double s) {
  return ObjectiveFunction(
      "exp-axis", 2, [k, s](std::span<const double> x) { return std::exp(s * x[k]); },
      [k, s](std::span<const double> x) {
        RealVector g(2, 0.0);
        g[k] = s * std::exp(s * x[k]);
        return g;
      });
}

}  // namespace

TEST(CheckCriterion, Examples) {
  auto c = check_criterion(1.0, 2.0, AlphaEstimate::analytic(4.0));
  EXPECT_TRUE(c.holds);
  EXPECT_DOUBLE_EQ(c.slack, 12.0);
  EXPECT_FALSE(check_criterion(1.0, 1.0, AlphaEstimate::analytic(4.0)).holds);
  EXPECT_TRUE(check_criterion(0.0, 1e-3, AlphaEstimate::analytic(1e-6)).holds);
  EXPECT_TRUE(check_criterion(5.0, 1.0, AlphaEstimate{}).holds);  // alpha = +inf
  EXPECT_THROW(check_criterion(1.0, 0.0, AlphaEstimate::analytic(1.0)), InputError);
}

TEST(ChooseEpsilon, Examples) {
  EXPECT_DOUBLE_EQ(choose_epsilon(0.0, 1.0, 4.0), 0.5);
  const double eps = choose_epsilon(1.0, 2.0, 4.0);
  EXPECT_DOUBLE_EQ(eps, 0.25);
  EXPECT_GT((1 - eps) * (1 - eps) * 4.0 * 4.0, 4.0);
  // Approaching the boundary drives epsilon to the lower clamp.
  EXPECT_DOUBLE_EQ(choose_epsilon(1.0 - 1e-15, 1.0, 4.0), 1e-6);
  EXPECT_THROW(choose_epsilon(1.0, 1.0, 4.0), PreconditionError);
}

TEST(ChooseStepSize, Examples) {
  EXPECT_DOUBLE_EQ(choose_step_size(1, 1, 2, 2, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(choose_step_size(1, 4, 1, 1, 0.25), 0.125);
  EXPECT_LT(choose_step_size(1, 1, 1e300, 2, 0.5), 1e-299);
}

TEST(ChooseStepSize, NeverExceedsCaps) {
  CounterRng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const double r = std::exp(rng.uniform(-5, 5));
    const std::size_t p = 1 + static_cast<std::size_t>(rng.uniform() * 50);
    const double L1 = std::exp(rng.uniform(-5, 5));
    const double L2 = std::exp(rng.uniform(-5, 5));
    const double eps = rng.uniform(1e-6, 1 - 1e-6);
    const double eta = choose_step_size(r, p, L1, L2, eps);
    EXPECT_LE(eta, r / (L1 * std::sqrt(double(p))));
    EXPECT_LE(eta, 2 * eps / (L2 * double(p)));
  }
}

TEST(BuildCertificate, QuadraticOneD) {
  const auto f = objectives::squared_norm(1);
  const Ball ball({0.5}, 1.0);
  const auto cert = build_certificate(f, ball, AlphaEstimate::analytic(4.0), 3.0, 2.0);
  // rho = 2 sqrt(0.25 / 4) / 1 = 0.5, eps = 0.25.
  EXPECT_DOUBLE_EQ(cert.epsilon, 0.25);
  EXPECT_DOUBLE_EQ(cert.eta, std::min(1.0 / 3.0, 2 * 0.25 / 2.0));
  EXPECT_DOUBLE_EQ(cert.delta, std::min(1.0, 0.75 * 4.0 * cert.eta));
  EXPECT_TRUE(cert.validate().empty());
  EXPECT_TRUE(cert.proved());
  EXPECT_FALSE(cert.heuristic_L());
}

TEST(BuildCertificate, ZeroLossStart) {
  const auto f = objectives::squared_norm(2);
  const auto cert = build_certificate(f, Ball({0.0, 0.0}, 1.0), AlphaEstimate::analytic(4.0), 2.0, 2.0);
  EXPECT_DOUBLE_EQ(cert.epsilon, 0.5);
  EXPECT_DOUBLE_EQ(cert.delta, std::min(1.0, 0.5 * 4.0 * cert.eta));
}

TEST(BuildCertificate, CriterionFailureCarriesSlack) {
  const auto f = objectives::squared_norm(1);
  try {
    build_certificate(f, Ball({1.0}, 0.5), AlphaEstimate::analytic(4.0), 3.0, 2.0);
    FAIL() << "expected CertificationError";
  } catch (const CertificationError& e) {
    EXPECT_DOUBLE_EQ(e.slack(), 0.25 * 4.0 - 4.0);
  }
}

TEST(BuildCertificate, ProvenanceFlags) {
  const auto f = objectives::squared_norm(2);
  const Ball ball({0.1, 0.1}, 1.0);
  const auto sampled = alpha_sampled(f, ball, 100, 1);
  const auto c1 = build_certificate(f(ball.center()), ball, sampled,
                                    estimate_derivative_bounds(f, ball, 1));
  EXPECT_FALSE(c1.proved());
  EXPECT_TRUE(c1.heuristic_L());
  EXPECT_TRUE(c1.sampled_alpha());
}

TEST(BuildCertificate, EpsilonInvariantHoldsInFloatingPoint) {
  CounterRng rng(5);
  int built = 0;
  for (int t = 0; t < 2000; ++t) {
    const double r = std::exp(rng.uniform(-3, 3));
    const double alpha = std::exp(rng.uniform(-3, 3));
    // f0 spread up to and including the boundary of the criterion.
    const double f0 = r * r * alpha / 4.0 * (1.0 - std::pow(10.0, rng.uniform(-16, 0)));
    const double gap = 1.0 - 2.0 * std::sqrt(f0 / alpha) / r;
    try {
      const auto c = build_certificate(f0, Ball({0.0}, r), AlphaEstimate::analytic(alpha),
                                       DerivativeBounds{1.0, 1.0}, rng.uniform(0.01, 0.99));
      const double om = 1 - c.epsilon;
      EXPECT_LT(4 * c.f_x0, om * om * c.radius * c.radius * c.alpha.value);
      ++built;
    } catch (const CertificationError&) {
      // Once 1 - rho is below the epsilon clamp no admissible epsilon exists; refusing is correct.
      EXPECT_LT(gap, 2e-6) << t;
    }
  }
  EXPECT_GT(built, 600);
}

TEST(AlphaSampled, Examples) {
  const auto f = objectives::squared_norm(3);
  const auto a = alpha_sampled(f, Ball({1.0, -1.0, 2.0}, 0.5), 500, 3);
  EXPECT_NEAR(a.value, 4.0, 1e-12);
  EXPECT_EQ(a.kind, AlphaKind::sampled);
  EXPECT_EQ(a.sample_count, 500u);
  EXPECT_TRUE(alpha_sampled(zero_objective(2), Ball({0.0, 0.0}, 1.0), 50, 3).infinite());
  const auto e = objectives::exponential();
  const double x0 = 0.3, r = 0.7;
  EXPECT_GE(alpha_sampled(e, Ball({x0}, r), 1000, 4).value, std::exp(x0 - r));
  EXPECT_THROW(alpha_sampled(f, Ball({0.0}, 1.0), 10, 1), InputError);
  EXPECT_THROW(alpha_sampled(f, Ball({0.0, 0.0, 0.0}, 1.0), 0, 1), InputError);
}

TEST(AlphaSampled, NeverBelowGridOracle) {
  const std::vector<ObjectiveFunction> fns = {objectives::exponential(), exp_neg2(),
                                              objectives::squared_norm(1),
                                              objectives::squared_norm(2), exp_axis(0, 1.0),
                                              exp_axis(1, -1.0)};
  CounterRng rng(17);
  for (const auto& f : fns) {
    for (int b = 0; b < 10; ++b) {
      RealVector c(f.dim());
      for (auto& e : c) e = rng.uniform(-2, 2);
      const Ball ball(c, rng.uniform(0.1, 1.5));
      const double grid = oracle::grid_alpha(f, ball, f.dim() == 1 ? 10001 : 401);
      const double sampled = alpha_sampled(f, ball, 500, derive_seed(17, "ball", b)).value;
      EXPECT_GE(sampled, grid * (1 - 1e-12)) << f.name() << " ball " << b;
    }
  }
}

TEST(DerivativeBounds, SampledQuadratic) {
  const auto f = objectives::squared_norm(2);
  const auto b = estimate_derivative_bounds(f, Ball({0.0, 0.0}, 1.0), 2);
  EXPECT_EQ(b.mode, BoundMode::sampled);
  EXPECT_LE(b.L1, 1.5 * 2.0 + 1e-12);  // |2 x_i| <= 2 on the unit ball
  EXPECT_GT(b.L1, 1.0);
  EXPECT_NEAR(b.L2, 3.0, 1e-6);        // Hessian 2 I, times 1.5
}
