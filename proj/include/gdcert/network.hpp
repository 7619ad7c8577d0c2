#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gdcert/activation.hpp"
#include "gdcert/core.hpp"
#include "gdcert/matrix.hpp"

namespace gdcert {

/// Feedforward network shape. Layers are numbered 1..L; layer 0 is the
/// input with width d. The output layer has width 1 and identity activation,
/// so `activations` holds sigma_1..sigma_{L-1}.
///
/// Flat parameter layout: W_1 (row-major, d_1 x d_0), b_1, W_2, b_2, ...,
/// W_L, b_L, for p = sum_l d_l (d_{l-1} + 1) entries.
class NetworkArchitecture {
 public:
  NetworkArchitecture(std::size_t input_dim, std::vector<std::size_t> layer_dims,
                      std::vector<Activation> activations);

  /// Same activation on every hidden layer.
  static NetworkArchitecture uniform(std::size_t input_dim,
                                     std::vector<std::size_t> layer_dims,
                                     const Activation& activation);

  std::size_t depth() const { return layer_dims_.size(); }
  std::size_t input_dim() const { return input_dim_; }
  /// d_l for l = 0..L.
  std::size_t width(std::size_t layer) const;
  const std::vector<std::size_t>& layer_dims() const { return layer_dims_; }
  /// sigma_l for l = 1..L-1.
  const Activation& activation(std::size_t layer) const;
  const std::vector<Activation>& activations() const { return activations_; }

  std::size_t param_count() const { return param_count_; }
  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;
  /// Flat index of (W_l)_{row, col}.
  std::size_t weight_index(std::size_t layer, std::size_t row, std::size_t col) const;
  std::size_t bias_index(std::size_t layer, std::size_t row) const;

 private:
  std::size_t input_dim_;
  std::vector<std::size_t> layer_dims_;
  std::vector<Activation> activations_;
  std::vector<std::size_t> weight_offsets_;
  std::vector<std::size_t> bias_offsets_;
  std::size_t param_count_ = 0;
};

/// Flat parameter vector w = (W_1, b_1, ..., W_L, b_L).
struct NetworkParams {
  RealVector flat;

  static NetworkParams zeros(const NetworkArchitecture& arch);

  double weight(const NetworkArchitecture& arch, std::size_t layer,
                std::size_t row, std::size_t col) const {
    return flat[arch.weight_index(layer, row, col)];
  }
  double& weight(const NetworkArchitecture& arch, std::size_t layer,
                 std::size_t row, std::size_t col) {
    return flat[arch.weight_index(layer, row, col)];
  }
  double bias(const NetworkArchitecture& arch, std::size_t layer, std::size_t row) const {
    return flat[arch.bias_index(layer, row)];
  }
  double& bias(const NetworkArchitecture& arch, std::size_t layer, std::size_t row) {
    return flat[arch.bias_index(layer, row)];
  }
};

/// Inputs x_1..x_n in R^d with targets y_1..y_n.
class Dataset {
 public:
  Dataset(std::vector<RealVector> inputs, RealVector targets);

  std::size_t size() const { return targets_.size(); }
  std::size_t dim() const { return inputs_.front().size(); }
  const RealVector& input(std::size_t i) const { return inputs_[i]; }
  double target(std::size_t i) const { return targets_[i]; }
  const std::vector<RealVector>& inputs() const { return inputs_; }
  const RealVector& targets() const { return targets_; }

  /// d x n matrix whose i-th column is x_i.
  Matrix design_matrix() const;
  /// max |entry| over all inputs.
  double max_abs_entry() const;
  /// (1/n) sum y_i^2.
  double mean_square_target() const;

 private:
  std::vector<RealVector> inputs_;
  RealVector targets_;
};

/// n Gaussian inputs normalized to unit length (hence linearly independent
/// with probability one when n <= d) and targets uniform in [-1, 1].
Dataset make_random_dataset(std::size_t n, std::size_t d, std::uint64_t seed);

/// n orthonormal inputs (Gram-Schmidt on Gaussian draws, n <= d), so that
/// X^T X = I, and targets uniform in [-1, 1].
Dataset make_orthonormal_dataset(std::size_t n, std::size_t d, std::uint64_t seed);

/// Per-layer pre-activations g_l, post-activations f_l = sigma_l(g_l) and
/// slopes sigma_l'(g_l) (the diagonal of D_l), stored at index l - 1.
struct LayerCache {
  std::vector<RealVector> pre;
  std::vector<RealVector> post;
  std::vector<RealVector> slope;
};

struct ForwardResult {
  double prediction = 0.0;
  LayerCache cache;
};

ForwardResult forward(const NetworkArchitecture& arch, const NetworkParams& params,
                      std::span<const double> x);
double predict(const NetworkArchitecture& arch, const NetworkParams& params,
               std::span<const double> x);

/// S(w) = (1/n) sum (y_i - f(x_i, w))^2.
double loss(const NetworkArchitecture& arch, const NetworkParams& params,
            const Dataset& data);

/// grad_w f(x, w) by reverse-mode accumulation.
RealVector grad_network(const NetworkArchitecture& arch, const NetworkParams& params,
                        std::span<const double> x);

/// grad S = (2/n) sum (f(x_i, w) - y_i) grad_w f(x_i, w), summed in index order.
RealVector grad_loss(const NetworkArchitecture& arch, const NetworkParams& params,
                     const Dataset& data);

/// q_i(x, w) = W_L D_{L-1} W_{L-1} ... W_2 D_1 e_i for i = 1..d_1, computed
/// as one row-vector sweep from the output layer down.
RealVector q_vector(const NetworkArchitecture& arch, const NetworkParams& params,
                    std::span<const double> x);

/// H_ij = grad_w f(x_i, w) . grad_w f(x_j, w).
Matrix gram_matrix(const NetworkArchitecture& arch, const NetworkParams& params,
                   const Dataset& data);

/// Smallest eigenvalue of a Gram matrix (Jacobi).
double min_eig_gram(const Matrix& gram);

/// |grad S|^2 / S, or +inf when S <= 1e-300.
double pl_ratio(const NetworkArchitecture& arch, const NetworkParams& params,
                const Dataset& data);

/// S as an objective over the flat parameter vector.
ObjectiveFunction network_objective(const NetworkArchitecture& arch,
                                    const Dataset& data);

}  // namespace gdcert
