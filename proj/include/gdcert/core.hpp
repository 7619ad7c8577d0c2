#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdcert {

using RealVector = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// f values at or below this are treated as exact zeros in ratio computations.
inline constexpr double kZeroLoss = 1e-300;

// Default relative tolerance for floating-point comparisons.
inline constexpr double kDefaultRelTol = 1e-9;

// ---------------------------------------------------------------------------
// Error hierarchy. Every failure the library reports derives from Error so
// callers (notably the CLI) can map categories to exit codes.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent arguments (dimension mismatch, non-finite input).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The convergence criterion fails; carries the (non-positive) slack.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& what, double slack)
      : Error(what), slack_(slack) {}
  double slack() const { return slack_; }

 private:
  double slack_;
};

/// An iteration produced a non-finite value.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t last_good_step,
                  double last_good_f)
      : Error(what), last_good_step_(last_good_step), last_good_f_(last_good_f) {}
  std::size_t last_good_step() const { return last_good_step_; }
  double last_good_f() const { return last_good_f_; }

 private:
  std::size_t last_good_step_;
  double last_good_f_;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// An activation violates sigma(0) = 0 or sigma' > 0.
class ActivationContractError : public Error {
 public:
  using Error::Error;
};

/// Input data are linearly dependent (or n > d).
class DataDegeneracyError : public Error {
 public:
  using Error::Error;
};

class SearchFailureError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Vector helpers.

/// Throws InputError if any entry is NaN or infinite.
void require_finite(std::span<const double> v, const char* what = "vector");

void require_same_dim(std::span<const double> a, std::span<const double> b,
                      const char* what = "vectors");

double euclidean_norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

/// out = a + scale * b
RealVector axpy(std::span<const double> a, double scale,
                std::span<const double> b);

bool all_finite(std::span<const double> v);

// ---------------------------------------------------------------------------

/// Closed Euclidean ball.
class Ball {
 public:
  Ball(RealVector center, double radius);

  const RealVector& center() const { return center_; }
  double radius() const { return radius_; }
  std::size_t dim() const { return center_.size(); }

 private:
  RealVector center_;
  double radius_;
};

/// True iff |x - center| <= radius.
bool in_ball(std::span<const double> x, const Ball& ball);

// ---------------------------------------------------------------------------

/// Known closed-form constants for an objective on a ball, when available.
struct AnalyticConstants {
  double alpha;  // lower bound on |grad f|^2 / f over the ball
  double L1;     // bound on |d_i f| over B(x0, r)
  double L2;     // bound on |d_ij f| over B(x0, 2r)
};

/// A nonnegative objective f: R^p -> [0, inf) with its gradient. The C^2
/// smoothness the convergence theory needs is assumed, not checked.
/// Both callables must be reentrant.
class ObjectiveFunction {
 public:
  using Value = std::function<double(std::span<const double>)>;
  using Gradient = std::function<RealVector(std::span<const double>)>;
  using Constants = std::function<std::optional<AnalyticConstants>(const Ball&)>;

  ObjectiveFunction(std::string name, std::size_t dim, Value value,
                    Gradient gradient, Constants constants = {});

  /// Checks dimension, evaluates, and rejects negative results.
  double operator()(std::span<const double> x) const;
  RealVector gradient(std::span<const double> x) const;

  /// Closed-form alpha/L1/L2 on the ball, if the objective provides them.
  std::optional<AnalyticConstants> analytic_constants(const Ball& ball) const;

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }

 private:
  std::string name_;
  std::size_t dim_;
  Value value_;
  Gradient gradient_;
  Constants constants_;
};

// ---------------------------------------------------------------------------

enum class TraceKind { descent, flow };

struct TraceStep {
  double time = 0.0;  // iteration index for descent, t for flow
  double f = 0.0;
  double grad_norm = 0.0;
  double dist_x0 = 0.0;
  // Residual R_j = f(x_{j+1}) - f(x_j) + eta |grad f(x_j)|^2; descent only,
  // absent on the final step.
  std::optional<double> residual;
  // Inline monitor results; absent when no certificate was attached.
  std::optional<double> rate_bound;
  std::optional<bool> ball_ok;
  std::optional<bool> rate_ok;
  std::optional<bool> residual_ok;
};

struct MonitorVerdict {
  std::string name;
  bool passed = true;
  double worst_slack = kInf;  // min over steps of (bound - measured)
  std::size_t violations = 0;
};

/// Per-step record of a descent or flow run. Points are stored every
/// `point_stride` steps (and always for the first and last step) so long runs
/// stay bounded in memory; scalar columns are stored for every step.
struct Trace {
  TraceKind kind = TraceKind::descent;
  double eta = 0.0;  // descent step size or flow integration step
  RealVector x0;
  std::vector<TraceStep> steps;
  std::vector<std::size_t> point_index;  // step index of each stored point
  std::vector<RealVector> points;
  std::vector<MonitorVerdict> monitor_verdicts;

  const RealVector& final_point() const { return points.back(); }
  std::size_t size() const { return steps.size(); }
};

}  // namespace gdcert
