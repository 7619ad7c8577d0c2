#include <gtest/gtest.h>

#include <cmath>

#include "gdcert/flow.hpp"
#include "gdcert/objectives.hpp"
#include "gdcert/rng.hpp"
#include "test_support.hpp"

using namespace gdcert;

namespace {

ObjectiveFunction shifted_bowl() {
  return ObjectiveFunction(
      "bowl+1", 2, [](std::span<const double> x) { return 1 + x[0] * x[0] + x[1] * x[1]; },
      [](std::span<const double> x) { return RealVector{2 * x[0], 2 * x[1]}; });
}

// f = cosh(x) - 1 + y^4 / 4 + y^2: a smooth non-quadratic bowl.
ObjectiveFunction smooth_bowl() {
  return ObjectiveFunction(
      "smooth-bowl", 2,
      [](std::span<const double> x) {
        return std::cosh(x[0]) - 1 + 0.25 * std::pow(x[1], 4) + x[1] * x[1];
      },
      [](std::span<const double> x) {
        return RealVector{std::sinh(x[0]), std::pow(x[1], 3) + 2 * x[1]};
      });
}

RealVector flow_end(const ObjectiveFunction& f, const RealVector& x0, double h, double T) {
  FlowConfig cfg;
  cfg.t_end = T;
  cfg.h = h;
  return integrate_flow(f, x0, cfg).final_point();
}

}  // namespace

TEST(IntegrateFlow, QuadraticMatchesExponential) {
  const auto f = objectives::squared_norm(1);
  FlowConfig cfg;
  cfg.t_end = 1.0;
  cfg.h = 1e-3;
  const auto tr = integrate_flow(f, RealVector{1.0}, cfg);
  EXPECT_EQ(tr.size(), 1001u);
  EXPECT_NEAR(tr.steps.back().time, 1.0, 1e-12);
  EXPECT_NEAR(tr.final_point()[0], std::exp(-2.0), 1e-8);
}

TEST(IntegrateFlow, StationaryStart) {
  FlowConfig cfg;
  cfg.t_end = 0.5;
  cfg.h = 1e-2;
  const auto tr = integrate_flow(shifted_bowl(), RealVector{0.0, 0.0}, cfg);
  for (const auto& p : tr.points) EXPECT_EQ(p, (RealVector{0.0, 0.0}));
}

TEST(IntegrateFlow, DecoupledQuadratic) {
  const auto f = objectives::quadratic({1.0, 4.0});
  FlowConfig cfg;
  cfg.t_end = 1.0;
  cfg.h = 1e-3;
  cfg.point_stride = 100;
  const auto tr = integrate_flow(f, RealVector{1.0, 1.0}, cfg);
  for (std::size_t i = 0; i < tr.points.size(); ++i) {
    const double t = tr.steps[tr.point_index[i]].time;
    EXPECT_NEAR(tr.points[i][0], std::exp(-2 * t), 1e-8);
    EXPECT_NEAR(tr.points[i][1], std::exp(-8 * t), 1e-8);
  }
}

TEST(IntegrateFlow, RejectsBadConfig) {
  const auto f = objectives::squared_norm(1);
  FlowConfig cfg;
  cfg.h = 2.0;
  cfg.t_end = 1.0;
  EXPECT_THROW(integrate_flow(f, RealVector{1.0}, cfg), InputError);
  cfg.h = 0.0;
  EXPECT_THROW(integrate_flow(f, RealVector{1.0}, cfg), InputError);
  EXPECT_EQ(flow_method_from_string("euler"), FlowMethod::euler);
  EXPECT_THROW(flow_method_from_string("rk45"), InputError);
}

TEST(IntegrateFlow, Divergence) {
  // rk4 on a stiff quadratic with h far outside the stability region.
  const auto f = objectives::quadratic({100.0});
  FlowConfig cfg;
  cfg.t_end = 100.0;
  cfg.h = 0.1;
  EXPECT_THROW(integrate_flow(f, RealVector{1.0}, cfg), DivergenceError);
}

TEST(IntegrateFlow, ObjectiveNonIncreasing) {
  CounterRng rng(8);
  for (int t = 0; t < 10; ++t) {
    FlowConfig cfg;
    cfg.t_end = 2.0;
    cfg.h = 1e-2;
    cfg.method = t % 2 ? FlowMethod::euler : FlowMethod::rk4;
    const auto tr = integrate_flow(smooth_bowl(), support::random_vector(2, rng), cfg);
    for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
      EXPECT_LE(tr.steps[k + 1].f, tr.steps[k].f + 1e-12);
    }
  }
}

TEST(IntegrateFlow, FourthOrderConvergence) {
  const auto f = smooth_bowl();
  const RealVector x0{1.2, -0.8};
  const double T = 1.0;
  const auto a = flow_end(f, x0, 0.1, T);
  const auto b = flow_end(f, x0, 0.05, T);
  const auto c = flow_end(f, x0, 0.025, T);
  const double d1 = distance(a, b), d2 = distance(b, c);
  // Observed order log2(d1 / d2) within 0.35 of 4.
  EXPECT_NEAR(std::log2(d1 / d2), 4.0, 0.35);
}

TEST(VerifyFlowBounds, QuadraticTightCase) {
  for (std::size_t p = 1; p <= 3; ++p) {
    const auto f = objectives::squared_norm(p);
    const RealVector x0(p, 0.4);
    const Ball ball(x0, 1.0);
    const auto k = f.analytic_constants(ball);
    const auto cert = build_certificate(f, ball, AlphaEstimate::analytic(k->alpha), k->L1, k->L2);
    FlowConfig cfg;
    cfg.t_end = 2.0;
    cfg.h = 1e-3;
    cfg.certificate = cert;
    const auto tr = integrate_flow(f, x0, cfg);
    for (const auto& v : tr.monitor_verdicts) EXPECT_TRUE(v.passed) << v.name;
    const auto rep = verify_flow_bounds(tr, cert);
    EXPECT_TRUE(rep.all_passed());
    // f(phi(t)) = e^{-4t} f(x0) exactly, so the rate bound is tight.
    EXPECT_LT(std::abs(rep.find("rate")->worst_slack), 1e-9);
  }
}

TEST(VerifyFlowBounds, ZeroStart) {
  const auto f = objectives::squared_norm(2);
  const Ball ball({0.0, 0.0}, 1.0);
  const auto cert = build_certificate(f, ball, AlphaEstimate::analytic(4.0), 2.0, 2.0);
  FlowConfig cfg;
  cfg.certificate = cert;
  const auto tr = integrate_flow(f, ball.center(), cfg);
  EXPECT_TRUE(verify_flow_bounds(tr, cert).all_passed());
}

TEST(CompareFlowDescent, Examples) {
  const auto f = objectives::squared_norm(1);
  const double dev = compare_flow_descent(f, RealVector{1.0}, 1e-3, 100);
  EXPECT_LT(dev, 5e-3);
  EXPECT_GT(dev, 0.0);
  EXPECT_EQ(compare_flow_descent(f, RealVector{0.0}, 1e-3, 100), 0.0);
  // First order: same horizon, half the step, about half the deviation.
  const double d_full = compare_flow_descent(f, RealVector{1.0}, 1e-2, 100);
  const double d_half = compare_flow_descent(f, RealVector{1.0}, 5e-3, 200);
  EXPECT_NEAR(d_full / d_half, 2.0, 0.1);
}
