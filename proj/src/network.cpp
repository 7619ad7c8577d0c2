#include "gdcert/network.hpp"

#include <cmath>
#include <utility>

#include "gdcert/oracle.hpp"
#include "gdcert/rng.hpp"

namespace gdcert {

NetworkArchitecture::NetworkArchitecture(std::size_t input_dim,
                                         std::vector<std::size_t> layer_dims,
                                         std::vector<Activation> activations)
    : input_dim_(input_dim),
      layer_dims_(std::move(layer_dims)),
      activations_(std::move(activations)) {
  if (input_dim_ == 0) throw InputError("network: input dimension must be positive");
  if (layer_dims_.size() < 2) throw InputError("network: depth L must be >= 2");
  if (layer_dims_.back() != 1) throw InputError("network: output width d_L must be 1");
  for (std::size_t w : layer_dims_) {
    if (w == 0) throw InputError("network: layer widths must be positive");
  }
  if (activations_.size() != layer_dims_.size() - 1) {
    throw InputError("network: need one activation per hidden layer");
  }
  std::size_t offset = 0;
  std::size_t fan_in = input_dim_;
  for (std::size_t w : layer_dims_) {
    weight_offsets_.push_back(offset);
    offset += w * fan_in;
    bias_offsets_.push_back(offset);
    offset += w;
    fan_in = w;
  }
  param_count_ = offset;
}

NetworkArchitecture NetworkArchitecture::uniform(std::size_t input_dim,
                                                 std::vector<std::size_t> layer_dims,
                                                 const Activation& activation) {
  const std::size_t hidden = layer_dims.empty() ? 0 : layer_dims.size() - 1;
  return NetworkArchitecture(input_dim, std::move(layer_dims),
                             std::vector<Activation>(hidden, activation));
}

std::size_t NetworkArchitecture::width(std::size_t layer) const {
  if (layer == 0) return input_dim_;
  if (layer > depth()) throw InputError("network: layer index out of range");
  return layer_dims_[layer - 1];
}

const Activation& NetworkArchitecture::activation(std::size_t layer) const {
  if (layer == 0 || layer >= depth()) {
    throw InputError("network: activations exist for layers 1..L-1 only");
  }
  return activations_[layer - 1];
}

std::size_t NetworkArchitecture::weight_offset(std::size_t layer) const {
  if (layer == 0 || layer > depth()) throw InputError("network: layer index out of range");
  return weight_offsets_[layer - 1];
}

std::size_t NetworkArchitecture::bias_offset(std::size_t layer) const {
  if (layer == 0 || layer > depth()) throw InputError("network: layer index out of range");
  return bias_offsets_[layer - 1];
}

std::size_t NetworkArchitecture::weight_index(std::size_t layer, std::size_t row,
                                              std::size_t col) const {
  return weight_offset(layer) + row * width(layer - 1) + col;
}

std::size_t NetworkArchitecture::bias_index(std::size_t layer, std::size_t row) const {
  return bias_offset(layer) + row;
}

NetworkParams NetworkParams::zeros(const NetworkArchitecture& arch) {
  return {RealVector(arch.param_count(), 0.0)};
}

Dataset::Dataset(std::vector<RealVector> inputs, RealVector targets)
    : inputs_(std::move(inputs)), targets_(std::move(targets)) {
  if (inputs_.empty()) throw InputError("dataset: need at least one sample");
  if (inputs_.size() != targets_.size()) {
    throw InputError("dataset: input and target counts differ");
  }
  const std::size_t d = inputs_.front().size();
  if (d == 0) throw InputError("dataset: inputs must be nonempty");
  for (const auto& x : inputs_) {
    if (x.size() != d) throw InputError("dataset: inputs have different dimensions");
    require_finite(x, "dataset input");
  }
  require_finite(targets_, "dataset targets");
}

Matrix Dataset::design_matrix() const {
  Matrix X(dim(), size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t s = 0; s < dim(); ++s) X(s, i) = inputs_[i][s];
  return X;
}

double Dataset::max_abs_entry() const {
  double m = 0.0;
  for (const auto& x : inputs_)
    for (double e : x) m = std::max(m, std::abs(e));
  return m;
}

double Dataset::mean_square_target() const {
  double s = 0.0;
  for (double y : targets_) s += y * y;
  return s / static_cast<double>(size());
}

Dataset make_random_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw InputError("make_random_dataset: n and d must be positive");
  CounterRng rng(derive_seed(seed, "dataset"));
  std::vector<RealVector> xs;
  RealVector ys;
  for (std::size_t i = 0; i < n; ++i) {
    RealVector x(d);
    double norm = 0.0;
    while (norm == 0.0) {
      for (auto& e : x) e = rng.normal();
      norm = euclidean_norm(x);
    }
    for (auto& e : x) e /= norm;
    xs.push_back(std::move(x));
  }
  for (std::size_t i = 0; i < n; ++i) ys.push_back(rng.uniform(-1.0, 1.0));
  return Dataset(std::move(xs), std::move(ys));
}

Dataset make_orthonormal_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || n > d) throw InputError("make_orthonormal_dataset: need 0 < n <= d");
  CounterRng rng(derive_seed(seed, "orthonormal-dataset"));
  std::vector<RealVector> xs;
  while (xs.size() < n) {
    RealVector x(d);
    for (auto& e : x) e = rng.normal();
    // Modified Gram-Schmidt, twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : xs) {
        const double c = dot(x, q);
        for (std::size_t k = 0; k < d; ++k) x[k] -= c * q[k];
      }
    }
    const double norm = euclidean_norm(x);
    if (norm < 1e-8) continue;
    for (auto& e : x) e /= norm;
    xs.push_back(std::move(x));
  }
  RealVector ys;
  for (std::size_t i = 0; i < n; ++i) ys.push_back(rng.uniform(-1.0, 1.0));
  return Dataset(std::move(xs), std::move(ys));
}

namespace {

void check_shapes(const NetworkArchitecture& arch, const NetworkParams& params,
                  std::span<const double> x) {
  if (params.flat.size() != arch.param_count()) {
    throw InputError("network: parameter vector has " +
                     std::to_string(params.flat.size()) + " entries, expected " +
                     std::to_string(arch.param_count()));
  }
  if (x.size() != arch.input_dim()) {
    throw InputError("network: input has dimension " + std::to_string(x.size()) +
                     ", expected " + std::to_string(arch.input_dim()));
  }
}

}  // namespace

ForwardResult forward(const NetworkArchitecture& arch, const NetworkParams& params,
                      std::span<const double> x) {
  check_shapes(arch, params, x);
  const std::size_t L = arch.depth();
  ForwardResult out;
  auto& cache = out.cache;
  cache.pre.resize(L);
  cache.post.resize(L);
  cache.slope.resize(L);

  RealVector input(x.begin(), x.end());
  for (std::size_t l = 1; l <= L; ++l) {
    const std::size_t rows = arch.width(l);
    const std::size_t cols = arch.width(l - 1);
    const double* W = params.flat.data() + arch.weight_offset(l);
    const double* b = params.flat.data() + arch.bias_offset(l);
    RealVector g(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < cols; ++j) s += W[i * cols + j] * input[j];
      g[i] = s;
    }
    RealVector f(rows), slope(rows);
    if (l < L) {
      const Activation& act = arch.activation(l);
      for (std::size_t i = 0; i < rows; ++i) {
        f[i] = act(g[i]);
        slope[i] = act.deriv(g[i]);
      }
    } else {
      f = g;
      slope.assign(rows, 1.0);
    }
    cache.pre[l - 1] = std::move(g);
    cache.slope[l - 1] = std::move(slope);
    cache.post[l - 1] = f;
    input = std::move(f);
  }
  out.prediction = cache.pre[L - 1][0];
  return out;
}

double predict(const NetworkArchitecture& arch, const NetworkParams& params,
               std::span<const double> x) {
  return forward(arch, params, x).prediction;
}

double loss(const NetworkArchitecture& arch, const NetworkParams& params,
            const Dataset& data) {
  if (data.dim() != arch.input_dim()) throw InputError("loss: data dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = data.target(i) - predict(arch, params, data.input(i));
    s += r * r;
  }
  return s / static_cast<double>(data.size());
}

RealVector grad_network(const NetworkArchitecture& arch, const NetworkParams& params,
                        std::span<const double> x) {
  const ForwardResult fw = forward(arch, params, x);
  const auto& cache = fw.cache;
  const std::size_t L = arch.depth();
  RealVector grad(arch.param_count(), 0.0);

  // delta = d f / d g_l, starting from the identity output layer.
  RealVector delta{1.0};
  for (std::size_t l = L; l >= 1; --l) {
    const std::size_t rows = arch.width(l);
    const std::size_t cols = arch.width(l - 1);
    const std::span<const double> below =
        l > 1 ? std::span<const double>(cache.post[l - 2]) : x;
    double* gW = grad.data() + arch.weight_offset(l);
    double* gb = grad.data() + arch.bias_offset(l);
    for (std::size_t i = 0; i < rows; ++i) {
      gb[i] = delta[i];
      for (std::size_t j = 0; j < cols; ++j) gW[i * cols + j] = delta[i] * below[j];
    }
    if (l == 1) break;
    const double* W = params.flat.data() + arch.weight_offset(l);
    RealVector next(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) next[j] += W[i * cols + j] * delta[i];
    const auto& slope = cache.slope[l - 2];
    for (std::size_t j = 0; j < cols; ++j) next[j] *= slope[j];
    delta = std::move(next);
  }
  return grad;
}

RealVector grad_loss(const NetworkArchitecture& arch, const NetworkParams& params,
                     const Dataset& data) {
  if (data.dim() != arch.input_dim()) throw InputError("grad_loss: data dimension mismatch");
  RealVector total(arch.param_count(), 0.0);
  const double scale = 2.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const RealVector gi = grad_network(arch, params, data.input(i));
    const double resid = predict(arch, params, data.input(i)) - data.target(i);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += scale * resid * gi[k];
  }
  return total;
}

RealVector q_vector(const NetworkArchitecture& arch, const NetworkParams& params,
                    std::span<const double> x) {
  const ForwardResult fw = forward(arch, params, x);
  const std::size_t L = arch.depth();
  // Row vector v = W_L, then v <- (v D_l) W_l for l = L-1 .. 2, then v D_1.
  const double* WL = params.flat.data() + arch.weight_offset(L);
  RealVector v(WL, WL + arch.width(L - 1));
  for (std::size_t l = L - 1; l >= 2; --l) {
    const auto& D = fw.cache.slope[l - 1];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= D[i];
    const std::size_t rows = arch.width(l);
    const std::size_t cols = arch.width(l - 1);
    const double* W = params.flat.data() + arch.weight_offset(l);
    RealVector u(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) u[j] += v[i] * W[i * cols + j];
    v = std::move(u);
  }
  const auto& D1 = fw.cache.slope[0];
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= D1[i];
  return v;
}

Matrix gram_matrix(const NetworkArchitecture& arch, const NetworkParams& params,
                   const Dataset& data) {
  const std::size_t n = data.size();
  std::vector<RealVector> grads;
  grads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grads.push_back(grad_network(arch, params, data.input(i)));
  Matrix H(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = dot(grads[i], grads[j]);
      H(i, j) = v;
      H(j, i) = v;
    }
  return H;
}

double min_eig_gram(const Matrix& gram) { return oracle::min_eigen_sym(gram).lambda_min; }

double pl_ratio(const NetworkArchitecture& arch, const NetworkParams& params,
                const Dataset& data) {
  const double s = loss(arch, params, data);
  if (s <= kZeroLoss) return kInf;
  const double g = euclidean_norm(grad_loss(arch, params, data));
  return g * g / s;
}

ObjectiveFunction network_objective(const NetworkArchitecture& arch,
                                    const Dataset& data) {
  if (data.dim() != arch.input_dim()) {
    throw InputError("network_objective: data dimension mismatch");
  }
  auto value = [arch, data](std::span<const double> w) {
    return loss(arch, NetworkParams{RealVector(w.begin(), w.end())}, data);
  };
  auto gradient = [arch, data](std::span<const double> w) {
    return grad_loss(arch, NetworkParams{RealVector(w.begin(), w.end())}, data);
  };
  return ObjectiveFunction("network-loss", arch.param_count(), value, gradient);
}

}  // namespace gdcert
