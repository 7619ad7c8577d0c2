#include <gtest/gtest.h>

#include <cmath>

#include "gdcert/init.hpp"
#include "test_support.hpp"

using namespace gdcert;

TEST(Theorem3Init, StructureAndLoss) {
  const auto arch = NetworkArchitecture::uniform(5, {4, 3, 2, 1}, activations::tanh());
  const double delta = 0.1, K = 0.7, A = 3.0;
  const auto w = theorem3_init(arch, delta, K, A, 5);
  for (std::size_t l = 1; l <= arch.depth(); ++l) {
    for (std::size_t r = 0; r < arch.width(l); ++r) {
      EXPECT_EQ(w.bias(arch, l, r), 0.0);
      for (std::size_t c = 0; c < arch.width(l - 1); ++c) {
        const double e = w.weight(arch, l, r, c);
        if (l == 1) EXPECT_EQ(e, 0.0);
        else if (l == arch.depth()) EXPECT_EQ(e, A);
        else {
          EXPECT_GE(e, delta);
          EXPECT_LE(e, K);
        }
      }
    }
  }
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto data = make_random_dataset(4, 5, s);
    const double S = loss(arch, theorem3_init(arch, delta, K, A, s), data);
    EXPECT_LE(std::abs(S - data.mean_square_target()), 1e-15 * data.mean_square_target());
  }
}

TEST(Theorem3Init, DegenerateIntervalAndErrors) {
  const auto arch = NetworkArchitecture::uniform(2, {3, 3, 1}, activations::tanh());
  const auto w = theorem3_init(arch, 0.25, 0.25, 1.0, 1);
  for (std::size_t k = 0; k < 9; ++k) EXPECT_EQ(w.flat[arch.weight_offset(2) + k], 0.25);
  EXPECT_THROW(theorem3_init(arch, 0.0, 1.0, 1.0, 1), InputError);
  EXPECT_THROW(theorem3_init(arch, 0.5, 0.4, 1.0, 1), InputError);
  EXPECT_THROW(theorem3_init(arch, 0.5, 0.5, 0.4, 1), InputError);
  EXPECT_EQ(theorem3_init(arch, 0.1, 0.9, 1.0, 3).flat, theorem3_init(arch, 0.1, 0.9, 1.0, 3).flat);
  EXPECT_NE(theorem3_init(arch, 0.1, 0.9, 1.0, 3).flat, theorem3_init(arch, 0.1, 0.9, 1.0, 4).flat);
}

TEST(LecunInit, VarianceBiasesDeterminism) {
  const auto arch = NetworkArchitecture::uniform(20, {5000, 1}, activations::smooth_leaky_relu(0.1));
  const double c = 1.5;
  const auto w = lecun_init(arch, c, 8);
  double sum = 0, sq = 0;
  const std::size_t n = 5000 * 20;
  for (std::size_t k = 0; k < n; ++k) {
    sum += w.flat[k];
    sq += w.flat[k] * w.flat[k];
  }
  const double mean = sum / double(n);
  const double var = sq / double(n) - mean * mean;
  EXPECT_NEAR(var, c / 20.0, 0.05 * c / 20.0);
  for (std::size_t r = 0; r < 5000; ++r) EXPECT_EQ(w.bias(arch, 1, r), 0.0);
  EXPECT_EQ(w.bias(arch, 2, 0), 0.0);
  EXPECT_EQ(lecun_init(arch, c, 8).flat, w.flat);
  EXPECT_THROW(lecun_init(arch, 0.0, 8), InputError);
}

TEST(ClopperPearson, KnownValuesAndContainment) {
  auto [lo0, hi0] = clopper_pearson(0, 10);
  EXPECT_EQ(lo0, 0.0);
  EXPECT_NEAR(hi0, 1 - std::pow(0.025, 0.1), 1e-12);  // closed form for k = 0
  auto [lo1, hi1] = clopper_pearson(10, 10);
  EXPECT_NEAR(lo1, std::pow(0.025, 0.1), 1e-12);
  EXPECT_EQ(hi1, 1.0);
  for (std::size_t n = 1; n <= 60; n += 7) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto [lo, hi] = clopper_pearson(k, n);
      const double th = double(k) / double(n);
      EXPECT_LE(lo, th);
      EXPECT_GE(hi, th);
    }
  }
  EXPECT_THROW(clopper_pearson(3, 2), InputError);
}

TEST(EstimateTheta, InfiniteToleranceAlwaysSucceeds) {
  const auto arch = NetworkArchitecture::uniform(4, {3, 1}, activations::smooth_leaky_relu(0.1));
  const auto data = make_random_dataset(2, 4, 1);
  const auto est = estimate_theta(arch, data, 1.0, 5, 0.01, 10, kInf, 3);
  EXPECT_EQ(est.theta_hat, 1.0);
  EXPECT_EQ(est.successes, 5u);
  ASSERT_EQ(est.outcomes.size(), 5u);
  for (const auto& o : est.outcomes) EXPECT_EQ(o.iterations, 0u);
}

TEST(EstimateTheta, SmoothLeakyReluHasSuccessesAndIsDeterministic) {
  const auto arch = NetworkArchitecture::uniform(6, {4, 1}, activations::smooth_leaky_relu(0.1));
  const auto data = make_random_dataset(3, 6, 2);
  const auto a = estimate_theta(arch, data, 1.0, 10, 0.05, 20000, 1e-6, 5);
  EXPECT_GT(a.theta_hat, 0.0);
  EXPECT_LE(a.ci_low, a.theta_hat);
  EXPECT_GE(a.ci_high, a.theta_hat);
  const auto b = estimate_theta(arch, data, 1.0, 10, 0.05, 20000, 1e-6, 5);
  EXPECT_EQ(a.theta_hat, b.theta_hat);
  for (std::size_t t = 0; t < a.outcomes.size(); ++t) {
    EXPECT_EQ(a.outcomes[t].final_S, b.outcomes[t].final_S);
    EXPECT_EQ(a.outcomes[t].seed, derive_seed(5, "lecun-trial", t));
  }
}

TEST(EstimateTheta, DivergenceCountsAsFailure) {
  const auto arch = NetworkArchitecture::uniform(3, {3, 1}, activations::linear());
  const auto data = make_random_dataset(2, 3, 3);
  const auto est = estimate_theta(arch, data, 1.0, 3, 1e3, 1000, 1e-6, 1);
  EXPECT_EQ(est.successes, 0u);
  for (const auto& o : est.outcomes) {
    EXPECT_FALSE(o.success);
    EXPECT_EQ(o.final_S, kInf);
  }
}
