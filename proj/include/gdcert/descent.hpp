#pragma once

#include <cstddef>
#include <optional>

#include "gdcert/certificate.hpp"
#include "gdcert/core.hpp"
#include "gdcert/report.hpp"

namespace gdcert {

struct DescentConfig {
  double eta = 0.0;
  std::size_t max_iter = 1000;
  /// Stop once f <= stop_f_tol. Defaults to 1e-10 * max(1, f(x0)).
  std::optional<double> stop_f_tol;
  /// When set, the ball, rate and residual monitors run at every step.
  std::optional<Certificate> certificate;
  std::size_t point_stride = 1;
};

/// Fixed-step gradient descent x_{k+1} = x_k - eta grad f(x_k). Throws
/// DivergenceError on a non-finite value or gradient.
Trace run_descent(const ObjectiveFunction& f, std::span<const double> x0,
                  const DescentConfig& config);

/// Checks at every recorded step
///   (a) x_k in the certificate ball, tolerance 1e-12 r;
///   (b) f(x_k) <= (1 - delta)^k f(x0) (1 + 1e-9);
///   (c) |x_k - x_K| <= (1 - delta)^{k/2} r (1 + 1e-9) + (1 - delta)^{K/2} r
///       for k < K, with the final iterate x_K standing in for the limit.
/// (c) runs on steps whose point was stored. Throws InputError when the
/// trace was not produced with the certificate's step size or start.
BoundReport verify_rate_bounds(const Trace& trace, const Certificate& cert);

/// Recomputes R_j = f(x_{j+1}) - f(x_j) + eta |grad f(x_j)|^2 from the trace
/// and flags |R_j| > eps eta |grad f(x_j)|^2 (1 + 1e-9). Also records the
/// sufficient-decrease inequality f(x_j) - f(x_{j+1}) >= (1 - eps) eta
/// |grad f(x_j)|^2. Stored points are re-evaluated through f as a
/// consistency check on the trace itself.
BoundReport check_descent_residual(const ObjectiveFunction& f, const Trace& trace,
                                   const Certificate& cert);

}  // namespace gdcert
