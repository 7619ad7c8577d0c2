#include "gdcert/descent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gdcert {
namespace {

constexpr double kBallTol = 1e-12;
constexpr double kRelTol = 1e-9;

void require_same_start(const Trace& trace, const Certificate& cert) {
  if (trace.x0 != cert.center) {
    throw InputError("trace does not start at the certificate center");
  }
}

}  // namespace

Trace run_descent(const ObjectiveFunction& f, std::span<const double> x0,
                  const DescentConfig& config) {
  if (!(config.eta > 0.0)) throw InputError("run_descent: eta must be positive");
  if (config.max_iter == 0) throw InputError("run_descent: max_iter must be >= 1");
  if (config.point_stride == 0) throw InputError("run_descent: point_stride must be >= 1");
  require_finite(x0, "run_descent x0");
  if (config.certificate && config.certificate->center.size() != x0.size()) {
    throw InputError("run_descent: certificate dimension mismatch");
  }

  const Certificate* cert = config.certificate ? &*config.certificate : nullptr;
  const double eta = config.eta;

  Trace trace;
  trace.kind = TraceKind::descent;
  trace.eta = eta;
  trace.x0.assign(x0.begin(), x0.end());

  RealVector x = trace.x0;
  double fx = f(x);
  RealVector g = f.gradient(x);
  if (!std::isfinite(fx) || !all_finite(g)) {
    throw DivergenceError("non-finite value at the starting point", 0, fx);
  }
  const double stop = config.stop_f_tol.value_or(1e-10 * std::max(1.0, fx));

  VerdictAccumulator ball_acc("ball"), rate_acc("rate"), residual_acc("residual");
  const double one_minus_delta = cert ? 1.0 - cert->delta : 1.0;

  auto record = [&](std::size_t k, const RealVector& point, double fk, double gnorm) {
    TraceStep step;
    step.time = static_cast<double>(k);
    step.f = fk;
    step.grad_norm = gnorm;
    step.dist_x0 = distance(point, trace.x0);
    if (cert) {
      const double dc = distance(point, cert->center);
      step.ball_ok = ball_acc.record(dc, cert->radius, kBallTol * cert->radius);
      const double bound = std::pow(one_minus_delta, static_cast<double>(k)) * cert->f_x0;
      step.rate_bound = bound;
      step.rate_ok = rate_acc.record(fk, bound, kRelTol * bound);
    }
    trace.steps.push_back(step);
    if (k % config.point_stride == 0) {
      trace.point_index.push_back(k);
      trace.points.push_back(point);
    }
  };

  double gnorm = euclidean_norm(g);
  record(0, x, fx, gnorm);

  std::size_t k = 0;
  while (k < config.max_iter && !(fx <= stop)) {
    RealVector next = axpy(x, -eta, g);
    const double fn = f(next);
    RealVector gn = f.gradient(next);
    if (!std::isfinite(fn) || !all_finite(next) || !all_finite(gn)) {
      std::ostringstream msg;
      msg << "descent diverged at step " << k + 1 << " (last good f = " << fx << ")";
      throw DivergenceError(msg.str(), k, fx);
    }
    const double g2 = gnorm * gnorm;
    const double residual = fn - fx + eta * g2;
    auto& cur = trace.steps.back();
    cur.residual = residual;
    if (cert) {
      const double bound = cert->epsilon * eta * g2;
      cur.residual_ok = residual_acc.record(std::abs(residual), bound, kRelTol * bound);
    }
    x = std::move(next);
    g = std::move(gn);
    fx = fn;
    gnorm = euclidean_norm(g);
    ++k;
    record(k, x, fx, gnorm);
  }

  if (trace.point_index.back() != k) {
    trace.point_index.push_back(k);
    trace.points.push_back(x);
  }
  if (cert) {
    trace.monitor_verdicts = {ball_acc.verdict(), rate_acc.verdict()};
    if (residual_acc.used()) trace.monitor_verdicts.push_back(residual_acc.verdict());
  }
  return trace;
}

BoundReport verify_rate_bounds(const Trace& trace, const Certificate& cert) {
  if (trace.kind != TraceKind::descent) throw InputError("verify_rate_bounds: not a descent trace");
  if (trace.eta != cert.eta) {
    throw InputError("verify_rate_bounds: trace step size differs from the certified eta");
  }
  require_same_start(trace, cert);
  if (trace.steps.empty()) throw InputError("verify_rate_bounds: empty trace");

  const std::size_t K = trace.steps.size() - 1;
  const double q = 1.0 - cert.delta;
  const double r = cert.radius;
  const double tail = std::pow(q, 0.5 * static_cast<double>(K)) * r;

  BoundReport report;
  report.steps.resize(trace.steps.size());
  VerdictAccumulator ball("ball"), rate("rate"), dist("distance");

  for (std::size_t k = 0; k <= K; ++k) {
    const auto& s = trace.steps[k];
    auto& out = report.steps[k];
    out.ball_ok = ball.record(s.dist_x0, r, kBallTol * r);
    const double bound = std::pow(q, static_cast<double>(k)) * cert.f_x0;
    out.rate_ok = rate.record(s.f, bound, kRelTol * bound);
  }
  const RealVector& final_point = trace.final_point();
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const std::size_t k = trace.point_index[i];
    if (k >= K) continue;
    const double measured = distance(trace.points[i], final_point);
    const double bound = std::pow(q, 0.5 * static_cast<double>(k)) * r;
    report.steps[k].distance_ok = dist.record(measured, bound + tail, kRelTol * bound);
  }
  report.summary = {ball.verdict(), rate.verdict()};
  if (dist.used()) report.summary.push_back(dist.verdict());
  return report;
}

BoundReport check_descent_residual(const ObjectiveFunction& f, const Trace& trace,
                                   const Certificate& cert) {
  if (trace.kind != TraceKind::descent) {
    throw InputError("check_descent_residual: not a descent trace");
  }
  BoundReport report;
  if (trace.steps.size() < 2) return report;

  // Stored points must reproduce the recorded f values.
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const double fk = f(trace.points[i]);
    const double recorded = trace.steps[trace.point_index[i]].f;
    if (std::abs(fk - recorded) > kRelTol * std::max(std::abs(recorded), kZeroLoss)) {
      throw InputError("check_descent_residual: trace is inconsistent with the objective");
    }
  }

  const double eta = trace.eta;
  VerdictAccumulator residual("residual"), decrease("decrease");
  report.steps.resize(trace.steps.size() - 1);
  for (std::size_t j = 0; j + 1 < trace.steps.size(); ++j) {
    const auto& cur = trace.steps[j];
    const auto& nxt = trace.steps[j + 1];
    const double g2 = cur.grad_norm * cur.grad_norm;
    const double rj = nxt.f - cur.f + eta * g2;
    auto& out = report.steps[j];
    out.residual = rj;
    const double bound = cert.epsilon * eta * g2;
    out.residual_ok = residual.record(std::abs(rj), bound, kRelTol * bound);
    const double need = (1.0 - cert.epsilon) * eta * g2;
    out.decrease_ok = decrease.record(need, cur.f - nxt.f, kRelTol * need);
  }
  report.summary = {residual.verdict(), decrease.verdict()};
  return report;
}

}  // namespace gdcert
