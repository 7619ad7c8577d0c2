#include "gdcert/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "gdcert/init.hpp"
#include "gdcert/oracle.hpp"

namespace gdcert {

double gamma(const Activation& act, double x) {
  if (!(x >= 0.0)) throw InputError("gamma: argument must be nonnegative");
  return std::max(act(x), std::abs(act(-x)));
}

std::vector<double> magnitude_recursion(const NetworkArchitecture& arch, double delta,
                                        double K, double M) {
  if (!(delta >= 0.0) || !(K >= delta) || !(M >= 0.0)) {
    throw InputError("magnitude_recursion: need delta, M >= 0 and K >= delta");
  }
  const std::size_t L = arch.depth();
  const double K_prime = K + 0.5 * delta;
  std::vector<double> a;
  a.push_back(M * delta * static_cast<double>(arch.input_dim()) + delta);
  for (std::size_t l = 2; l < L; ++l) {
    const double prev = gamma(arch.activation(l - 1), a.back());
    a.push_back(prev * K_prime * static_cast<double>(arch.width(l - 1)) + delta);
  }
  return a;
}

double min_slope(const Activation& act, double a) {
  if (!(a > 0.0)) throw InputError("min_slope: range must be positive");
  double c = 0.0;
  if (act.shape() == SlopeShape::constant || act.shape() == SlopeShape::even_peak) {
    c = act.deriv(a);
  } else {
    constexpr int kGrid = 10001;
    double grid_min = kInf;
    for (int i = 0; i < kGrid; ++i) {
      const double u = -a + 2.0 * a * i / (kGrid - 1);
      grid_min = std::min(grid_min, act.deriv(u));
    }
    if (const auto floor = act.envelope().slope_floor) {
      c = std::max(*floor, grid_min);
    } else {
      c = 0.999 * grid_min;
    }
  }
  if (!(c > 0.0)) {
    throw ActivationContractError("activation '" + act.name() +
                                  "' has no positive slope floor on [-a, a]");
  }
  return c;
}

InitEnvelope make_envelope(const NetworkArchitecture& arch, double delta, double K,
                           double M) {
  InitEnvelope env;
  env.delta = delta;
  env.K = K;
  env.K_prime = K + 0.5 * delta;
  env.M = M;
  env.a = magnitude_recursion(arch, delta, K, M);
  for (std::size_t l = 1; l < arch.depth(); ++l) {
    env.c.push_back(min_slope(arch.activation(l), env.a[l - 1]));
  }
  return env;
}

DataSpectrum data_alpha_beta(const Dataset& data) {
  const Matrix X = data.design_matrix();
  Matrix G = X.transpose() * X;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < G.rows(); ++i)
    for (std::size_t j = 0; j < G.cols(); ++j) G(i, j) *= inv_n;
  const auto range = oracle::min_eigen_sym(G);
  return {range.lambda_min, range.lambda_max};
}

double analytic_pl_lower_bound(const NetworkArchitecture& arch,
                               const InitEnvelope& envelope, double alpha_data,
                               double A) {
  const double half = 0.5 * envelope.delta;
  if (!(A > half)) throw InputError("analytic_pl_lower_bound: need A > delta / 2");
  if (!(alpha_data > 0.0)) throw InputError("analytic_pl_lower_bound: alpha_data must be positive");
  const std::size_t L = arch.depth();
  if (envelope.c.size() != L - 1) throw InputError("analytic_pl_lower_bound: envelope depth mismatch");
  // q_r >= (A - delta/2) (delta/2)^{L-2} d_{L-1}...d_2 c_{L-1}...c_1.
  double q = A - half;
  for (std::size_t l = 2; l < L; ++l) q *= half * static_cast<double>(arch.width(l));
  for (double c : envelope.c) q *= c;
  return 4.0 * alpha_data * q * q * static_cast<double>(arch.width(1));
}

namespace {

// Closed-form derivative bounds for S over B(w, R).
//
// Every parameter of a point in the ball is within R of the center entry, so
// |W_l| entries <= Wmax_l = max|W_l| + R and |b_l| entries <= bmax_l.
// Forward magnitudes: m_0 = M, G_l = Wmax_l d_{l-1} m_{l-1} + bmax_l bounds
// |g_l|, m_l = gamma_l(G_l) bounds |f_l|, and F = G_L bounds the output.
//
// For a single parameter theta in layer m, with s_m = max(m_{m-1}, 1):
//   I_m = N_m = s_m                       (|dg_m|_inf, |dg_m|_1)
//   I_l = Wmax_l C2_{l-1} N_{l-1},  N_l = d_l I_l      (l > m)
// where C2 caps sigma'. For a pair (theta in m, theta' in m') the 1-norm of
// the second derivative of g_l obeys
//   Q_l <= d_l Wmax_l Qf_{l-1} + [m = l] C2_{l-1} I'_{l-1} + [m' = l] C2_{l-1} I_{l-1},
//   Qf_l <= C3_l min(I_l N'_l, N_l I'_l) + C2_l Q_l,
// with C3 capping |sigma''|. With P1 = max_m N_L and P2 = max Q_L:
//   |d_i S|  <= 2 (F + Y) P1,
//   |d_ij S| <= 2 (P1^2 + (F + Y) P2),
// Y = max |y_i|.
struct Magnitudes {
  double F = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
};

Magnitudes bound_output_derivatives(const NetworkArchitecture& arch,
                                    std::span<const double> center, double R,
                                    double M) {
  const std::size_t L = arch.depth();
  std::vector<double> Wmax(L + 1, 0.0), bmax(L + 1, 0.0), C2(L + 1, 1.0), C3(L + 1, 0.0);
  std::vector<double> d(L + 1);
  for (std::size_t l = 0; l <= L; ++l) d[l] = static_cast<double>(arch.width(l));
  for (std::size_t l = 1; l <= L; ++l) {
    const std::size_t nW = arch.width(l) * arch.width(l - 1);
    const std::size_t wo = arch.weight_offset(l);
    const std::size_t bo = arch.bias_offset(l);
    double wm = 0.0, bm = 0.0;
    for (std::size_t k = 0; k < nW; ++k) wm = std::max(wm, std::abs(center[wo + k]));
    for (std::size_t k = 0; k < arch.width(l); ++k) bm = std::max(bm, std::abs(center[bo + k]));
    Wmax[l] = wm + R;
    bmax[l] = bm + R;
    if (l < L) {
      const auto& env = arch.activation(l).envelope();
      if (!env.slope_cap || !env.curvature_cap) {
        throw UnsupportedError("analytic bounds need slope and curvature caps for '" +
                               arch.activation(l).name() + "'");
      }
      C2[l] = *env.slope_cap;
      C3[l] = *env.curvature_cap;
    }
  }

  std::vector<double> m(L + 1, 0.0);
  m[0] = M;
  double F = 0.0;
  for (std::size_t l = 1; l <= L; ++l) {
    const double G = Wmax[l] * d[l - 1] * m[l - 1] + bmax[l];
    if (l < L) {
      m[l] = gamma(arch.activation(l), G);
    } else {
      F = G;
    }
  }

  // I[m][l], N[m][l] for parameters in layer m.
  std::vector<std::vector<double>> I(L + 1, std::vector<double>(L + 1, 0.0));
  std::vector<std::vector<double>> N = I;
  for (std::size_t lm = 1; lm <= L; ++lm) {
    I[lm][lm] = N[lm][lm] = std::max(m[lm - 1], 1.0);
    for (std::size_t l = lm + 1; l <= L; ++l) {
      I[lm][l] = Wmax[l] * C2[l - 1] * N[lm][l - 1];
      N[lm][l] = d[l] * I[lm][l];
    }
  }

  Magnitudes out;
  out.F = F;
  for (std::size_t lm = 1; lm <= L; ++lm) out.P1 = std::max(out.P1, N[lm][L]);
  for (std::size_t a = 1; a <= L; ++a) {
    for (std::size_t b = a; b <= L; ++b) {
      double Qf = 0.0;  // 1-norm bound on the second derivative of f_{l-1}
      double Q = 0.0;
      for (std::size_t l = 1; l <= L; ++l) {
        Q = d[l] * Wmax[l] * Qf;
        if (l >= 2) {
          if (a == l) Q += C2[l - 1] * I[b][l - 1];
          if (b == l) Q += C2[l - 1] * I[a][l - 1];
        }
        if (l < L) {
          const double cross = std::min(I[a][l] * N[b][l], N[a][l] * I[b][l]);
          Qf = C3[l] * cross + C2[l] * Q;
        }
      }
      out.P2 = std::max(out.P2, Q);
    }
  }
  return out;
}

}  // namespace

DerivativeBounds lipschitz_bounds(const NetworkArchitecture& arch, const Dataset& data,
                                  const Ball& ball, BoundMode mode, std::uint64_t seed) {
  if (ball.dim() != arch.param_count()) {
    throw InputError("lipschitz_bounds: ball dimension differs from parameter count");
  }
  if (data.dim() != arch.input_dim()) throw InputError("lipschitz_bounds: data dimension mismatch");
  if (mode == BoundMode::sampled) {
    return estimate_derivative_bounds(network_objective(arch, data), ball, seed);
  }
  double Y = 0.0;
  for (double y : data.targets()) Y = std::max(Y, std::abs(y));
  const double M = data.max_abs_entry();
  const auto first = bound_output_derivatives(arch, ball.center(), ball.radius(), M);
  const auto second = bound_output_derivatives(arch, ball.center(), 2.0 * ball.radius(), M);
  DerivativeBounds out;
  out.mode = BoundMode::analytic;
  out.L1 = 2.0 * (first.F + Y) * first.P1;
  out.L2 = 2.0 * (second.P1 * second.P1 + (second.F + Y) * second.P2);
  return out;
}

FindAResult find_A(const NetworkArchitecture& arch, const Dataset& data, double delta,
                   double K, std::uint64_t seed, const FindAOptions& options) {
  if (!(delta > 0.0)) throw InputError("find_A: delta must be positive");
  if (arch.depth() > 2 && !(K >= delta)) throw InputError("find_A: need K >= delta");
  if (data.dim() != arch.input_dim()) throw InputError("find_A: data dimension mismatch");
  if (!(options.margin >= 0.0 && options.margin < 1.0)) {
    throw InputError("find_A: margin must lie in [0, 1)");
  }

  FindAResult res;
  res.spectrum = data_alpha_beta(data);
  if (!(res.spectrum.alpha_data > 1e-12)) {
    throw DataDegeneracyError(
        "inputs are not linearly independent (min eigenvalue of X^T X / n is " +
        std::to_string(res.spectrum.alpha_data) + "); the criterion requires d >= n");
  }
  const double K_eff = arch.depth() > 2 ? K : delta;
  res.S0 = data.mean_square_target();
  res.envelope = make_envelope(arch, delta, K_eff, data.max_abs_entry());

  const double r = 0.5 * delta;
  double A = delta;
  for (;;) {
    const double bound = analytic_pl_lower_bound(arch, res.envelope,
                                                 res.spectrum.alpha_data, A);
    const auto check = check_criterion(res.S0, r, AlphaEstimate::analytic(bound));
    if (check.holds && check.relative_margin >= options.margin) {
      res.pl_bound = bound;
      break;
    }
    A *= 2.0;
    ++res.doublings;
    if (A > options.A_max) {
      throw SearchFailureError("find_A: output scale A exceeded " +
                               std::to_string(options.A_max));
    }
  }
  res.A = A;
  res.params = theorem3_init(arch, delta, K_eff, A, seed);
  const double S_init = loss(arch, res.params, data);
  if (std::abs(S_init - res.S0) > 1e-15 * std::max(1.0, res.S0)) {
    throw PreconditionError("find_A: initialization loss differs from (1/n) sum y^2");
  }
  const Ball ball(res.params.flat, r);
  const DerivativeBounds lb = lipschitz_bounds(arch, data, ball, options.lipschitz_mode, seed);
  res.certificate = build_certificate(res.S0, ball, AlphaEstimate::analytic(res.pl_bound), lb,
                                      options.epsilon_fraction);
  res.eta = res.certificate.eta;
  return res;
}

}  // namespace gdcert
