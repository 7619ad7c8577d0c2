#include "gdcert/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gdcert {

void require_finite(std::span<const double> v, const char* what) {
  for (double e : v) {
    if (!std::isfinite(e)) {
      throw InputError(std::string(what) + " has a non-finite entry");
    }
  }
}

void require_same_dim(std::span<const double> a, std::span<const double> b,
                      const char* what) {
  if (a.size() != b.size()) {
    throw InputError(std::string(what) + ": dimension mismatch (" +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
}

bool all_finite(std::span<const double> v) {
  for (double e : v) {
    if (!std::isfinite(e)) return false;
  }
  return true;
}

double euclidean_norm(std::span<const double> v) {
  require_finite(v, "euclidean_norm input");
  // Scaled accumulation so huge or tiny entries do not overflow/underflow.
  double scale = 0.0;
  for (double e : v) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double e : v) {
    const double s = e / scale;
    sum += s * s;
  }
  return scale * std::sqrt(sum);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b, "distance");
  RealVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return euclidean_norm(d);
}

RealVector axpy(std::span<const double> a, double scale,
                std::span<const double> b) {
  require_same_dim(a, b, "axpy");
  RealVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + scale * b[i];
  return out;
}

Ball::Ball(RealVector center, double radius)
    : center_(std::move(center)), radius_(radius) {
  require_finite(center_, "ball center");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw InputError("ball radius must be positive and finite");
  }
}

bool in_ball(std::span<const double> x, const Ball& ball) {
  require_same_dim(x, ball.center(), "in_ball");
  return distance(x, ball.center()) <= ball.radius();
}

ObjectiveFunction::ObjectiveFunction(std::string name, std::size_t dim,
                                     Value value, Gradient gradient,
                                     Constants constants)
    : name_(std::move(name)),
      dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      constants_(std::move(constants)) {
  if (dim_ == 0) throw InputError("objective dimension must be positive");
  if (!value_ || !gradient_) throw InputError("objective callables are empty");
}

double ObjectiveFunction::operator()(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw InputError("objective '" + name_ + "': expected dimension " +
                     std::to_string(dim_) + ", got " + std::to_string(x.size()));
  }
  const double v = value_(x);
  if (v < 0.0) {
    throw InputError("objective '" + name_ + "' returned a negative value");
  }
  return v;
}

RealVector ObjectiveFunction::gradient(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw InputError("objective '" + name_ + "': expected dimension " +
                     std::to_string(dim_) + ", got " + std::to_string(x.size()));
  }
  RealVector g = gradient_(x);
  if (g.size() != dim_) {
    throw InputError("objective '" + name_ + "': gradient has wrong dimension");
  }
  return g;
}

std::optional<AnalyticConstants> ObjectiveFunction::analytic_constants(
    const Ball& ball) const {
  if (!constants_) return std::nullopt;
  return constants_(ball);
}

}  // namespace gdcert
