#include "gdcert/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace gdcert::oracle {

RealVector fd_gradient(const std::function<double(std::span<const double>)>& f,
                       std::span<const double> x, double h) {
  if (!(h > 0.0)) throw InputError("fd_gradient: h must be positive");
  RealVector probe(x.begin(), x.end());
  RealVector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = probe[i];
    probe[i] = xi + h;
    const double fp = f(probe);
    probe[i] = xi - h;
    const double fm = f(probe);
    probe[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

RealVector fd_gradient(const ObjectiveFunction& f, std::span<const double> x,
                       double h) {
  return fd_gradient([&f](std::span<const double> v) { return f(v); }, x, h);
}

double grid_alpha(const ObjectiveFunction& f, const Ball& ball,
                  std::size_t resolution) {
  const std::size_t p = ball.dim();
  if (p > 3) throw UnsupportedError("grid_alpha supports dimension <= 3");
  if (resolution == 0) throw InputError("grid_alpha: resolution must be >= 1");
  if (f.dim() != p) throw InputError("grid_alpha: dimension mismatch");

  const auto& c = ball.center();
  const double r = ball.radius();
  auto coord = [&](std::size_t axis, std::size_t k) {
    if (resolution == 1) return c[axis];
    const double t = 2.0 * static_cast<double>(k) /
                         static_cast<double>(resolution - 1) - 1.0;
    return c[axis] + r * t;
  };

  std::size_t total = 1;
  for (std::size_t a = 0; a < p; ++a) total *= resolution;

  double best = kInf;
  RealVector x(p);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t a = 0; a < p; ++a) {
      x[a] = coord(a, rem % resolution);
      rem /= resolution;
    }
    if (!in_ball(x, ball)) continue;
    const double fx = f(x);
    if (fx <= kZeroLoss) continue;
    const double g = euclidean_norm(f.gradient(x));
    best = std::min(best, g * g / fx);
  }
  return best;
}

std::vector<double> eigenvalues_sym(const Matrix& input) {
  const std::size_t n = input.rows();
  if (n != input.cols()) throw InputError("eigenvalues_sym: matrix not square");
  if (n == 0) throw InputError("eigenvalues_sym: empty matrix");
  if (n > 2000) throw InputError("eigenvalues_sym: n > 2000 not supported");
  const double norm = input.frobenius_norm();
  if (input.asymmetry() > 1e-10 * norm) {
    throw InputError("eigenvalues_sym: matrix is not symmetric");
  }

  // Work on the symmetrized copy.
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (input(i, j) + input(j, i));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const double target = 1e-12 * norm;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p, q) (Golub & Van Loan, Alg. 8.4.1).
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = cs * akp - sn * akq;
          a(k, q) = sn * akp + cs * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = cs * apk - sn * aqk;
          a(q, k) = sn * apk + cs * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

EigenRange min_eigen_sym(const Matrix& a) {
  const auto eig = eigenvalues_sym(a);
  return {eig.front(), eig.back()};
}

}  // namespace gdcert::oracle
