#pragma once

#include "gdcert/core.hpp"

namespace gdcert::objectives {

/// f(x) = sum_i c_i x_i^2 with every c_i > 0. Closed-form constants on
/// B(x0, r): alpha = 4 min c, L1 = 2 max_i c_i (|x0_i| + r), L2 = 2 max c.
ObjectiveFunction quadratic(RealVector curvatures);

/// f(x) = |x|^2 in dimension p.
ObjectiveFunction squared_norm(std::size_t p);

/// 1-D f(x) = exp(x). Has no zero, so the criterion never holds; used to
/// exercise alpha estimation (the infimum e^{x0 - r} sits at the left end).
ObjectiveFunction exponential();

}  // namespace gdcert::objectives
