#pragma once

#include <optional>
#include <string>

#include "gdcert/certificate.hpp"
#include "gdcert/core.hpp"
#include "gdcert/report.hpp"

namespace gdcert {

enum class FlowMethod { euler, rk4 };

std::string to_string(FlowMethod method);
FlowMethod flow_method_from_string(const std::string& s);

struct FlowConfig {
  double t_end = 1.0;
  double h = 1e-3;
  FlowMethod method = FlowMethod::rk4;
  /// When set, ball and exponential-rate monitors run at every sample.
  std::optional<Certificate> certificate;
  std::size_t point_stride = 1;
};

/// Fixed-step explicit integration of d phi/dt = -grad f(phi) from x0 to
/// t_end, sampled every step (t_k = k h). Throws DivergenceError on a
/// non-finite state.
Trace integrate_flow(const ObjectiveFunction& f, std::span<const double> x0,
                     const FlowConfig& config);

/// Checks at every sample: ball containment (tolerance 1e-12 r);
/// f(phi(t)) <= e^{-alpha t} f(x0) (1 + 10 h); and, against the final state
/// phi(T), |phi(t) - phi(T)| <= r e^{-alpha t / 2} (1 + 10 h) + r e^{-alpha T / 2}.
BoundReport verify_flow_bounds(const Trace& trace, const Certificate& cert);

/// max_k |x_k - phi(k eta)| over k = 0..steps, where x_k is fixed-step
/// descent and phi is rk4 with h = eta / 100.
double compare_flow_descent(const ObjectiveFunction& f, std::span<const double> x0,
                            double eta, std::size_t steps);

}  // namespace gdcert
