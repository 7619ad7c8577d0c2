#include "gdcert/activation.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "gdcert/core.hpp"

namespace gdcert {

Activation::Activation(std::string name, Fn value, Fn deriv, Fn second_deriv,
                       SlopeShape shape, Envelope envelope, double parameter)
    : name_(std::move(name)),
      value_(std::move(value)),
      deriv_(std::move(deriv)),
      second_(std::move(second_deriv)),
      shape_(shape),
      envelope_(envelope),
      parameter_(parameter) {
  if (!value_ || !deriv_ || !second_) {
    throw ActivationContractError("activation '" + name_ + "' has an empty callable");
  }
  if (!(std::abs(value_(0.0)) < 1e-15)) {
    throw ActivationContractError("activation '" + name_ + "' does not vanish at 0");
  }
  constexpr int kProbes = 201;
  for (int i = 0; i < kProbes; ++i) {
    const double x = -10.0 + 20.0 * i / (kProbes - 1);
    if (!(deriv_(x) > 0.0)) {
      throw ActivationContractError("activation '" + name_ +
                                    "' has a non-positive slope at x = " +
                                    std::to_string(x));
    }
  }
}

namespace activations {

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Activation linear() {
  return Activation(
      "linear", [](double x) { return x; }, [](double) { return 1.0; },
      [](double) { return 0.0; }, SlopeShape::constant, {1.0, 1.0, 0.0});
}

Activation tanh() {
  return Activation(
      "tanh", [](double x) { return std::tanh(x); },
      [](double x) {
        const double c = std::cosh(x);
        return 1.0 / (c * c);
      },
      [](double x) {
        const double t = std::tanh(x);
        const double c = std::cosh(x);
        return -2.0 * t / (c * c);
      },
      SlopeShape::even_peak, {std::nullopt, 1.0, 4.0 / (3.0 * std::sqrt(3.0))});
}

Activation bipolar_sigmoid() {
  return Activation(
      "bipolar_sigmoid", [](double x) { return std::tanh(0.5 * x); },
      [](double x) {
        const double c = std::cosh(0.5 * x);
        return 0.5 / (c * c);
      },
      [](double x) {
        const double t = std::tanh(0.5 * x);
        const double c = std::cosh(0.5 * x);
        return -0.5 * t / (c * c);
      },
      SlopeShape::even_peak, {std::nullopt, 0.5, 1.0 / (3.0 * std::sqrt(3.0))});
}

Activation smooth_leaky_relu(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw ActivationContractError("smooth leaky ReLU slope must lie in (0, 1)");
  }
  const double b = 1.0 - a;
  return Activation(
      "smooth_leaky_relu",
      [a, b](double x) { return a * x + b * (softplus(x) - std::numbers::ln2); },
      [a, b](double x) { return a + b * logistic(x); },
      [b](double x) {
        const double s = logistic(x);
        return b * s * (1.0 - s);
      },
      SlopeShape::generic, {a, 1.0, 0.25 * b}, a);
}

Activation softplus_shifted() {
  return Activation(
      "softplus", [](double x) { return softplus(x) - std::numbers::ln2; },
      [](double x) { return logistic(x); },
      [](double x) {
        const double s = logistic(x);
        return s * (1.0 - s);
      },
      SlopeShape::generic, {std::nullopt, 1.0, 0.25});
}

Activation by_name(const std::string& name, double parameter) {
  if (name == "linear") return linear();
  if (name == "tanh") return tanh();
  if (name == "bipolar_sigmoid") return bipolar_sigmoid();
  if (name == "smooth_leaky_relu") return smooth_leaky_relu(parameter);
  if (name == "softplus") return softplus_shifted();
  throw InputError("unknown activation '" + name + "'");
}

}  // namespace activations
}  // namespace gdcert
