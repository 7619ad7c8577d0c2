#include "gdcert/objectives.hpp"

#include <algorithm>
#include <cmath>

namespace gdcert::objectives {

ObjectiveFunction quadratic(RealVector curvatures) {
  if (curvatures.empty()) throw InputError("quadratic: no curvatures");
  for (double c : curvatures) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw InputError("quadratic: curvatures must be positive and finite");
    }
  }
  const std::size_t p = curvatures.size();
  auto value = [curvatures](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += curvatures[i] * x[i] * x[i];
    return s;
  };
  auto gradient = [curvatures](std::span<const double> x) {
    RealVector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * curvatures[i] * x[i];
    return g;
  };
  auto constants = [curvatures](const Ball& ball) -> std::optional<AnalyticConstants> {
    if (ball.dim() != curvatures.size()) return std::nullopt;
    const double cmin = *std::min_element(curvatures.begin(), curvatures.end());
    const double cmax = *std::max_element(curvatures.begin(), curvatures.end());
    double l1 = 0.0;
    for (std::size_t i = 0; i < curvatures.size(); ++i) {
      l1 = std::max(l1, 2.0 * curvatures[i] * (std::abs(ball.center()[i]) + ball.radius()));
    }
    return AnalyticConstants{4.0 * cmin, l1, 2.0 * cmax};
  };
  return ObjectiveFunction("quadratic", p, value, gradient, constants);
}

ObjectiveFunction squared_norm(std::size_t p) {
  return quadratic(RealVector(p, 1.0));
}

ObjectiveFunction exponential() {
  auto value = [](std::span<const double> x) { return std::exp(x[0]); };
  auto gradient = [](std::span<const double> x) { return RealVector{std::exp(x[0])}; };
  auto constants = [](const Ball& ball) -> std::optional<AnalyticConstants> {
    const double c = ball.center()[0];
    const double r = ball.radius();
    return AnalyticConstants{std::exp(c - r), std::exp(c + r), std::exp(c + 2.0 * r)};
  };
  return ObjectiveFunction("exp", 1, value, gradient, constants);
}

}  // namespace gdcert::objectives
