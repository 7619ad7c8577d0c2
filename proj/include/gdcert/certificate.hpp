#pragma once

#include <cstdint>
#include <string>

#include "gdcert/core.hpp"

namespace gdcert {

enum class AlphaKind { analytic, sampled, grid_oracle };
enum class BoundMode { analytic, sampled };

std::string to_string(AlphaKind kind);
std::string to_string(BoundMode mode);
AlphaKind alpha_kind_from_string(const std::string& s);
BoundMode bound_mode_from_string(const std::string& s);

/// Estimate of alpha(x0, r) = inf |grad f|^2 / f over the ball (zeros of f
/// excluded). +inf when f vanishes on the whole ball.
struct AlphaEstimate {
  double value = kInf;
  AlphaKind kind = AlphaKind::analytic;
  std::size_t sample_count = 0;

  static AlphaEstimate analytic(double value);
  bool infinite() const { return value == kInf; }
};

struct CriterionCheck {
  bool holds = false;
  double slack = 0.0;  // r^2 alpha - 4 f(x0); +inf for infinite alpha

  /// slack / (r^2 alpha), in [.., 1]; 1 when f(x0) = 0 or alpha infinite.
  double relative_margin = 0.0;
};

struct DerivativeBounds {
  double L1 = 0.0;  // max |d_i f| over B(x0, r)
  double L2 = 0.0;  // max |d_ij f| over B(x0, 2r)
  BoundMode mode = BoundMode::analytic;
};

/// Constants of the fixed-step descent guarantee, assembled so that
///   4 f(x0) < (1 - epsilon)^2 r^2 alpha,
///   eta <= min{ r / (L1 sqrt(p)), 2 epsilon / (L2 p) },
///   delta = min{1, (1 - epsilon) alpha eta},
/// which gives f(x_k) <= (1 - delta)^k f(x0), x_k in B(x0, r) and
/// |x_k - x*| <= (1 - delta)^{k/2} r.
struct Certificate {
  RealVector center;
  double radius = 0.0;
  double f_x0 = 0.0;
  AlphaEstimate alpha;
  double epsilon = 0.5;
  double L1 = 0.0;
  double L2 = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  BoundMode lipschitz_mode = BoundMode::analytic;

  Ball ball() const { return Ball(center, radius); }
  std::size_t dim() const { return center.size(); }

  /// alpha is a true lower bound and L1/L2 are analytic.
  bool proved() const {
    return alpha.kind == AlphaKind::analytic &&
           lipschitz_mode == BoundMode::analytic;
  }
  bool heuristic_L() const { return lipschitz_mode == BoundMode::sampled; }
  bool sampled_alpha() const { return alpha.kind != AlphaKind::analytic; }

  /// Re-checks every invariant listed above; returns a description of the
  /// first violation, or an empty string.
  std::string validate() const;
};

/// Minimum of |grad f|^2 / f over n_samples uniform points in the ball.
/// This over-estimates the infimum and is never certifying on its own.
AlphaEstimate alpha_sampled(const ObjectiveFunction& f, const Ball& ball,
                            std::size_t n_samples, std::uint64_t seed);

/// 4 f(x0) < r^2 alpha, strict.
CriterionCheck check_criterion(double f_x0, double r, const AlphaEstimate& alpha);

/// epsilon = fraction * (1 - rho) with rho = 2 sqrt(f_x0 / alpha) / r, clamped
/// to [1e-6, 1 - 1e-6]. fraction = 0.5 picks the midpoint of the feasible
/// interval (0, 1 - rho).
double choose_epsilon(double f_x0, double r, double alpha,
                      double fraction = 0.5);

/// min{ r / (L1 sqrt(p)), 2 epsilon / (L2 p) }.
double choose_step_size(double r, std::size_t p, double L1, double L2,
                        double epsilon);

/// Samples |d_i f| at 10 p points of B(x0, r) and finite-difference Hessian
/// entries at 10 p points of B(x0, 2r), scaled by 1.5.
DerivativeBounds estimate_derivative_bounds(const ObjectiveFunction& f,
                                            const Ball& ball,
                                            std::uint64_t seed);

/// Assembles a Certificate. Throws CertificationError (carrying the slack)
/// if the criterion fails or the chosen epsilon cannot satisfy it in floating
/// point.
Certificate build_certificate(double f_x0, const Ball& ball,
                              const AlphaEstimate& alpha,
                              const DerivativeBounds& bounds,
                              double epsilon_fraction = 0.5);

Certificate build_certificate(const ObjectiveFunction& f, const Ball& ball,
                              const AlphaEstimate& alpha, double L1, double L2,
                              BoundMode mode = BoundMode::analytic,
                              double epsilon_fraction = 0.5);

}  // namespace gdcert
