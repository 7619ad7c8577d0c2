#pragma once

#include <cstdint>
#include <vector>

#include "gdcert/certificate.hpp"
#include "gdcert/network.hpp"

namespace gdcert {

/// max{ sigma(x), |sigma(-x)| } for x >= 0: the largest |sigma(u)| over
/// |u| <= x, since sigma is increasing with sigma(0) = 0.
double gamma(const Activation& act, double x);

/// Bounds a_1..a_{L-1} on |g_l(x_i, w')| for every w' within delta/2 of a
/// theorem3_init-style initialization (W_1 = 0, biases 0, middle entries in
/// [delta, K]):
///   a_1 = M delta d + delta,
///   a_l = gamma_{l-1}(a_{l-1}) (K + delta/2) d_{l-1} + delta.
std::vector<double> magnitude_recursion(const NetworkArchitecture& arch, double delta,
                                        double K, double M);

/// Lower bound on min_{|u| <= a} sigma'(u). Throws ActivationContractError
/// if the result is not positive.
double min_slope(const Activation& act, double a);

struct InitEnvelope {
  double delta = 0.0;
  double K = 0.0;
  double K_prime = 0.0;  // K + delta / 2
  double M = 0.0;
  std::vector<double> a;  // a_1..a_{L-1}
  std::vector<double> c;  // c_1..c_{L-1}
};

InitEnvelope make_envelope(const NetworkArchitecture& arch, double delta, double K,
                           double M);

struct DataSpectrum {
  double alpha_data = 0.0;  // min eigenvalue of (1/n) X^T X
  double beta_data = 0.0;   // max eigenvalue
};

DataSpectrum data_alpha_beta(const Dataset& data);

/// 4 alpha_data (A - delta/2)^2 (delta/2)^{2L-4}
///   (d_{L-1} ... d_2 c_{L-1} ... c_1)^2 d_1,
/// a lower bound on |grad S(w')|^2 / S(w') over B(w, delta/2) whenever W_L
/// entries of w are >= A. Throws InputError if A <= delta/2.
double analytic_pl_lower_bound(const NetworkArchitecture& arch,
                               const InitEnvelope& envelope, double alpha_data,
                               double A);

/// L1 (first derivatives of S over the ball) and L2 (second derivatives
/// over the doubled ball). Analytic mode is a closed-form bound, see
/// bounds.cpp; sampled mode probes 10 p points with a 1.5 safety factor.
DerivativeBounds lipschitz_bounds(const NetworkArchitecture& arch, const Dataset& data,
                                  const Ball& ball, BoundMode mode,
                                  std::uint64_t seed = 0);

struct FindAOptions {
  double margin = 0.1;  // required relative criterion margin
  double A_max = 1e12;
  double epsilon_fraction = 0.5;
  BoundMode lipschitz_mode = BoundMode::analytic;
};

struct FindAResult {
  double A = 0.0;
  double eta = 0.0;
  Certificate certificate;
  NetworkParams params;  // theorem3_init at this A
  InitEnvelope envelope;
  DataSpectrum spectrum;
  double S0 = 0.0;
  double pl_bound = 0.0;
  std::size_t doublings = 0;
};

/// Doubles A from delta until 4 S(w) <= (1 - margin) (delta^2 / 4) * bound(A),
/// then certifies descent from theorem3_init(arch, delta, K, A, seed) on
/// B(w, delta/2). For depth 2 there are no middle matrices; delta then only
/// sets the ball radius and K is unused.
FindAResult find_A(const NetworkArchitecture& arch, const Dataset& data, double delta,
                   double K, std::uint64_t seed, const FindAOptions& options = {});

}  // namespace gdcert
