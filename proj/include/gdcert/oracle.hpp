#pragma once

#include <cstddef>
#include <vector>

#include "gdcert/core.hpp"
#include "gdcert/matrix.hpp"

// Brute-force reference computations. Property tests compare library results
// against these, so nothing here calls into the certificate or network code.
namespace gdcert::oracle {

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
RealVector fd_gradient(const ObjectiveFunction& f, std::span<const double> x,
                       double h);

/// Same, for a plain callable.
RealVector fd_gradient(const std::function<double(std::span<const double>)>& f,
                       std::span<const double> x, double h);

/// Infimum of |grad f|^2 / f over a regular grid (resolution points per axis,
/// endpoints included) intersected with the ball; points with f <= 1e-300 are
/// skipped. +inf if every grid point was skipped. Dimension must be <= 3.
double grid_alpha(const ObjectiveFunction& f, const Ball& ball,
                  std::size_t resolution);

struct EigenRange {
  double lambda_min;
  double lambda_max;
};

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations run until the off-diagonal Frobenius norm is below
/// 1e-12 * |A|_F.
std::vector<double> eigenvalues_sym(const Matrix& a);

/// Extreme eigenvalues via eigenvalues_sym. Throws InputError if A is not
/// square or is asymmetric beyond 1e-10 relative.
EigenRange min_eigen_sym(const Matrix& a);

}  // namespace gdcert::oracle
