#include "gdcert/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gdcert {
namespace {

constexpr double kBallTol = 1e-12;

double exp_decay(double alpha, double t) {
  if (t == 0.0) return 1.0;
  return std::exp(-alpha * t);
}

// One explicit step of d phi/dt = -grad f(phi).
RealVector flow_step(const ObjectiveFunction& f, const RealVector& x, double h,
                     FlowMethod method) {
  const std::size_t p = x.size();
  if (method == FlowMethod::euler) return axpy(x, -h, f.gradient(x));
  const RealVector k1 = f.gradient(x);
  const RealVector k2 = f.gradient(axpy(x, -0.5 * h, k1));
  const RealVector k3 = f.gradient(axpy(x, -0.5 * h, k2));
  const RealVector k4 = f.gradient(axpy(x, -h, k3));
  RealVector out(p);
  for (std::size_t i = 0; i < p; ++i) {
    out[i] = x[i] - h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace

std::string to_string(FlowMethod method) {
  return method == FlowMethod::euler ? "euler" : "rk4";
}

FlowMethod flow_method_from_string(const std::string& s) {
  if (s == "euler") return FlowMethod::euler;
  if (s == "rk4") return FlowMethod::rk4;
  throw InputError("unknown flow method '" + s + "'");
}

Trace integrate_flow(const ObjectiveFunction& f, std::span<const double> x0,
                     const FlowConfig& config) {
  if (!(config.h > 0.0)) throw InputError("integrate_flow: h must be positive");
  if (!(config.h < config.t_end)) throw InputError("integrate_flow: h must be < t_end");
  if (config.point_stride == 0) throw InputError("integrate_flow: point_stride must be >= 1");
  require_finite(x0, "integrate_flow x0");
  const Certificate* cert = config.certificate ? &*config.certificate : nullptr;
  if (cert && cert->center.size() != x0.size()) {
    throw InputError("integrate_flow: certificate dimension mismatch");
  }

  const double h = config.h;
  const auto n_steps = static_cast<std::size_t>(std::llround(config.t_end / h));

  Trace trace;
  trace.kind = TraceKind::flow;
  trace.eta = h;
  trace.x0.assign(x0.begin(), x0.end());

  VerdictAccumulator ball_acc("ball"), rate_acc("rate");
  const double rate_tol = 10.0 * h;

  auto record = [&](std::size_t k, const RealVector& x, double fx, double gnorm) {
    TraceStep step;
    step.time = static_cast<double>(k) * h;
    step.f = fx;
    step.grad_norm = gnorm;
    step.dist_x0 = distance(x, trace.x0);
    if (cert) {
      step.ball_ok = ball_acc.record(distance(x, cert->center), cert->radius,
                                     kBallTol * cert->radius);
      const double bound = exp_decay(cert->alpha.value, step.time) * cert->f_x0;
      step.rate_bound = bound;
      step.rate_ok = rate_acc.record(fx, bound, rate_tol * bound);
    }
    trace.steps.push_back(step);
    if (k % config.point_stride == 0 || k == n_steps) {
      trace.point_index.push_back(k);
      trace.points.push_back(x);
    }
  };

  RealVector x = trace.x0;
  double fx = f(x);
  RealVector g = f.gradient(x);
  if (!std::isfinite(fx) || !all_finite(g)) {
    throw DivergenceError("non-finite value at the starting point", 0, fx);
  }
  record(0, x, fx, euclidean_norm(g));
  for (std::size_t k = 1; k <= n_steps; ++k) {
    RealVector next = flow_step(f, x, h, config.method);
    if (!all_finite(next)) {
      std::ostringstream msg;
      msg << "flow diverged at t = " << static_cast<double>(k) * h;
      throw DivergenceError(msg.str(), k - 1, fx);
    }
    const double fn = f(next);
    const RealVector gn = f.gradient(next);
    if (!std::isfinite(fn) || !all_finite(gn)) {
      throw DivergenceError("flow reached a non-finite objective value", k - 1, fx);
    }
    x = std::move(next);
    fx = fn;
    record(k, x, fx, euclidean_norm(gn));
  }
  if (cert) trace.monitor_verdicts = {ball_acc.verdict(), rate_acc.verdict()};
  return trace;
}

BoundReport verify_flow_bounds(const Trace& trace, const Certificate& cert) {
  if (trace.kind != TraceKind::flow) throw InputError("verify_flow_bounds: not a flow trace");
  if (trace.x0 != cert.center) {
    throw InputError("verify_flow_bounds: trace does not start at the certificate center");
  }
  if (trace.steps.empty()) throw InputError("verify_flow_bounds: empty trace");

  const double h = trace.eta;
  const double tol = 10.0 * h;
  const double alpha = cert.alpha.value;
  const double r = cert.radius;
  const double t_final = trace.steps.back().time;
  const double tail = r * exp_decay(0.5 * alpha, t_final);

  BoundReport report;
  report.steps.resize(trace.steps.size());
  VerdictAccumulator ball("ball"), rate("rate"), dist("distance");
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    auto& out = report.steps[k];
    out.ball_ok = ball.record(s.dist_x0, r, kBallTol * r);
    const double bound = exp_decay(alpha, s.time) * cert.f_x0;
    out.rate_ok = rate.record(s.f, bound, tol * bound);
  }
  const RealVector& final_point = trace.final_point();
  const std::size_t last = trace.steps.size() - 1;
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const std::size_t k = trace.point_index[i];
    if (k >= last) continue;
    const double bound = r * exp_decay(0.5 * alpha, trace.steps[k].time);
    report.steps[k].distance_ok =
        dist.record(distance(trace.points[i], final_point), bound + tail, tol * bound);
  }
  report.summary = {ball.verdict(), rate.verdict()};
  if (dist.used()) report.summary.push_back(dist.verdict());
  return report;
}

double compare_flow_descent(const ObjectiveFunction& f, std::span<const double> x0,
                            double eta, std::size_t steps) {
  if (!(eta > 0.0)) throw InputError("compare_flow_descent: eta must be positive");
  require_finite(x0, "compare_flow_descent x0");
  constexpr int kSubsteps = 100;
  const double h = eta / kSubsteps;

  RealVector xd(x0.begin(), x0.end());
  RealVector xf = xd;
  double worst = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    xd = axpy(xd, -eta, f.gradient(xd));
    for (int s = 0; s < kSubsteps; ++s) xf = flow_step(f, xf, h, FlowMethod::rk4);
    if (!all_finite(xd) || !all_finite(xf)) {
      throw DivergenceError("compare_flow_descent diverged", k, kInf);
    }
    worst = std::max(worst, distance(xd, xf));
  }
  return worst;
}

}  // namespace gdcert
