#pragma once

#include <functional>
#include <optional>
#include <string>

namespace gdcert {

/// How sigma' is shaped; lets min_slope skip the grid search when the
/// minimum over [-a, a] is known in closed form.
enum class SlopeShape {
  constant,   // sigma' constant
  even_peak,  // sigma' even, maximal at 0, decreasing in |u|
  generic,
};

/// A C^2 activation with sigma(0) = 0 and sigma' > 0, together with the
/// global slope and curvature envelopes used by the analytic bounds.
class Activation {
 public:
  using Fn = std::function<double(double)>;

  struct Envelope {
    std::optional<double> slope_floor;  // C1: inf sigma'
    std::optional<double> slope_cap;    // C2: sup sigma'
    std::optional<double> curvature_cap;  // sup |sigma''|
  };

  /// Probes sigma(0) and sigma' on [-10, 10]; throws ActivationContractError
  /// if |sigma(0)| >= 1e-15 or some probed slope is not positive.
  Activation(std::string name, Fn value, Fn deriv, Fn second_deriv,
             SlopeShape shape, Envelope envelope, double parameter = 0.0);

  double operator()(double x) const { return value_(x); }
  double deriv(double x) const { return deriv_(x); }
  double second_deriv(double x) const { return second_(x); }

  const std::string& name() const { return name_; }
  /// Shape parameter (the leaky slope a for smooth leaky ReLU), else 0.
  double parameter() const { return parameter_; }
  SlopeShape shape() const { return shape_; }
  const Envelope& envelope() const { return envelope_; }

 private:
  std::string name_;
  Fn value_;
  Fn deriv_;
  Fn second_;
  SlopeShape shape_;
  Envelope envelope_;
  double parameter_;
};

namespace activations {

Activation linear();
Activation tanh();
/// (1 - e^{-x}) / (1 + e^{-x}), evaluated as tanh(x / 2).
Activation bipolar_sigmoid();
/// a x + (1 - a) (log(1 + e^x) - log 2), a in (0, 1). Slopes lie in [a, 1].
Activation smooth_leaky_relu(double a);
/// log(1 + e^x) - log 2.
Activation softplus_shifted();

/// Looks up a built-in by name; `parameter` is the leaky slope where used.
Activation by_name(const std::string& name, double parameter = 0.1);

/// Overflow-safe log(1 + e^x).
double softplus(double x);
double logistic(double x);

}  // namespace activations
}  // namespace gdcert
