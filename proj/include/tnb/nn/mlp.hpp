#ifndef TNB_NN_MLP_HPP_
#define TNB_NN_MLP_HPP_

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnb/error.hpp"
#include "tnb/random.hpp"

namespace tnb::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Activation { tanh, relu, linear };

inline std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
    case Activation::linear: return "linear";
  }
  return "linear";
}

inline Activation activation_from_string(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  if (name == "linear") return Activation::linear;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

// One dense layer inside a flat parameter array: a row-major fan_out x fan_in
// weight block followed by fan_out biases, starting at `offset`.
struct LayerShape {
  std::size_t fan_in = 0;
  std::size_t fan_out = 0;
  std::size_t offset = 0;

  std::size_t weight_count() const { return fan_in * fan_out; }
  std::size_t param_count() const { return (fan_in + 1) * fan_out; }
  bool operator==(const LayerShape&) const = default;
};

struct MlpSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden;
  std::size_t output_dim = 0;
  Activation hidden_activation = Activation::tanh;
  Activation output_activation = Activation::linear;

  std::size_t num_layers() const { return hidden.size() + 1; }

  std::vector<LayerShape> layout() const {
    std::vector<LayerShape> layers;
    layers.reserve(num_layers());
    std::size_t fan_in = input_dim;
    std::size_t offset = 0;
    for (std::size_t l = 0; l < num_layers(); ++l) {
      const std::size_t fan_out = l < hidden.size() ? hidden[l] : output_dim;
      layers.push_back({fan_in, fan_out, offset});
      offset += (fan_in + 1) * fan_out;
      fan_in = fan_out;
    }
    return layers;
  }

  std::size_t param_count() const {
    std::size_t count = 0;
    for (const auto& layer : layout()) count += layer.param_count();
    return count;
  }

  void validate() const {
    if (input_dim == 0) throw ConfigError("mlp: input_dim must be positive");
    if (output_dim == 0) throw ConfigError("mlp: output_dim must be positive");
    if (hidden.empty()) throw ConfigError("mlp: at least one hidden layer is required");
    for (auto h : hidden) {
      if (h == 0) throw ConfigError("mlp: hidden layer widths must be positive");
    }
    if (hidden_activation == Activation::linear) {
      throw ConfigError("mlp: hidden activation must be tanh or relu");
    }
    if (output_activation != Activation::linear) {
      throw ConfigError("mlp: output activation must be linear");
    }
  }

  bool operator==(const MlpSpec&) const = default;
};

// Flat parameters together with the layer layout they were created for.
struct ParamVector {
  std::vector<double> values;
  std::vector<LayerShape> layout;

  static ParamVector zeros(const MlpSpec& spec) {
    return {std::vector<double>(spec.param_count(), 0.0), spec.layout()};
  }

  std::size_t size() const { return values.size(); }

  bool matches(const MlpSpec& spec) const {
    return layout == spec.layout() && values.size() == spec.param_count();
  }
};

// Glorot-style uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
inline std::vector<double> init_params(const MlpSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<double> params(spec.param_count(), 0.0);
  for (const auto& layer : spec.layout()) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.fan_in + layer.fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (std::size_t i = 0; i < layer.weight_count(); ++i) params[layer.offset + i] = dist(rng);
  }
  return params;
}

inline ParamVector init_param_vector(const MlpSpec& spec, Rng& rng) {
  return {init_params(spec, rng), spec.layout()};
}

namespace detail {

inline void apply_activation(Activation a, Matrix& m) {
  switch (a) {
    case Activation::tanh: m = m.array().tanh().matrix(); break;
    case Activation::relu: m = m.cwiseMax(0.0); break;
    case Activation::linear: break;
  }
}

// Multiplies `delta` in place by the activation derivative, expressed through
// the activation's output.
inline void apply_activation_derivative(Activation a, const Matrix& output, Matrix& delta) {
  switch (a) {
    case Activation::tanh: delta.array() *= 1.0 - output.array().square(); break;
    case Activation::relu: delta.array() *= (output.array() > 0.0).cast<double>(); break;
    case Activation::linear: break;
  }
}

inline Eigen::Map<const RowMatrix> weights(std::span<const double> params, const LayerShape& l) {
  return {params.data() + l.offset, static_cast<Eigen::Index>(l.fan_out),
          static_cast<Eigen::Index>(l.fan_in)};
}

// Owned copy of a layer's weights. Eigen picks reduction order from the
// runtime alignment of its operands, so multiplying straight from the flat
// parameter buffer would make results depend on heap addresses.
inline Matrix weight_matrix(std::span<const double> params, const LayerShape& l) { return weights(params, l); }

inline Eigen::Map<const Vector> biases(std::span<const double> params, const LayerShape& l) {
  return {params.data() + l.offset + l.weight_count(), static_cast<Eigen::Index>(l.fan_out)};
}

inline void check_params(const MlpSpec& spec, std::span<const double> params) {
  if (params.size() != spec.param_count()) {
    throw ConfigError("mlp: parameter vector has " + std::to_string(params.size()) +
                      " entries, spec requires " + std::to_string(spec.param_count()));
  }
}

}  // namespace detail

// Activations of every layer for a batch (one sample per column);
// activations[0] is the input, activations.back() the network output.
struct ForwardCache {
  std::vector<Matrix> activations;

  const Matrix& output() const { return activations.back(); }
};

inline void forward_batch(const MlpSpec& spec, std::span<const double> params, const Matrix& input,
                          ForwardCache& cache) {
  detail::check_params(spec, params);
  if (static_cast<std::size_t>(input.rows()) != spec.input_dim) {
    throw ConfigError("mlp: input has " + std::to_string(input.rows()) + " rows, expected " +
                      std::to_string(spec.input_dim));
  }
  const auto layers = spec.layout();
  cache.activations.resize(layers.size() + 1);
  cache.activations[0] = input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Matrix& out = cache.activations[l + 1];
    out.noalias() = detail::weight_matrix(params, layers[l]) * cache.activations[l];
    out.colwise() += detail::biases(params, layers[l]);
    detail::apply_activation(l + 1 < layers.size() ? spec.hidden_activation : spec.output_activation,
                             out);
  }
}

inline Matrix forward_batch(const MlpSpec& spec, std::span<const double> params, const Matrix& input) {
  ForwardCache cache;
  forward_batch(spec, params, input, cache);
  return std::move(cache.activations.back());
}

// Reverse pass for the scalar sum_i output_grad(:, i) . y(:, i). Parameter
// gradients summed over the batch are ADDED into `param_grad`; the input
// gradient is written to `input_grad` when it is non-null.
inline void backward_batch(const MlpSpec& spec, std::span<const double> params,
                           const ForwardCache& cache, const Matrix& output_grad,
                           std::span<double> param_grad, Matrix* input_grad = nullptr) {
  detail::check_params(spec, params);
  if (param_grad.size() != params.size()) throw ConfigError("mlp: gradient buffer size mismatch");
  const auto layers = spec.layout();
  if (cache.activations.size() != layers.size() + 1) throw ConfigError("mlp: stale forward cache");
  if (output_grad.rows() != cache.output().rows() || output_grad.cols() != cache.output().cols()) {
    throw ConfigError("mlp: output gradient shape does not match forward output");
  }

  Matrix delta = output_grad;
  detail::apply_activation_derivative(spec.output_activation, cache.output(), delta);
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    const Matrix& a_in = cache.activations[l];
    Eigen::Map<RowMatrix> gw(param_grad.data() + layer.offset, static_cast<Eigen::Index>(layer.fan_out),
                             static_cast<Eigen::Index>(layer.fan_in));
    Eigen::Map<Vector> gb(param_grad.data() + layer.offset + layer.weight_count(),
                          static_cast<Eigen::Index>(layer.fan_out));
    // Reduce into owned storage first; reducing straight into a Map over the
    // caller's buffer lets Eigen pick the summation order from its alignment.
    const Matrix layer_grad = delta * a_in.transpose();
    const Vector bias_grad = delta.rowwise().sum();
    gw += layer_grad;
    gb += bias_grad;
    if (l > 0) {
      Matrix prev = detail::weight_matrix(params, layer).transpose() * delta;
      detail::apply_activation_derivative(spec.hidden_activation, a_in, prev);
      delta = std::move(prev);
    } else if (input_grad != nullptr) {
      *input_grad = detail::weight_matrix(params, layer).transpose() * delta;
    }
  }
}

inline std::vector<double> mlp_forward(const MlpSpec& spec, std::span<const double> params,
                                       std::span<const double> input) {
  if (input.size() != spec.input_dim) {
    throw ConfigError("mlp: input length " + std::to_string(input.size()) + " != " +
                      std::to_string(spec.input_dim));
  }
  Matrix x = Eigen::Map<const Vector>(input.data(), static_cast<Eigen::Index>(input.size()));
  Matrix y = forward_batch(spec, params, x);
  return {y.data(), y.data() + y.size()};
}

inline std::vector<double> mlp_forward(const MlpSpec& spec, const ParamVector& params,
                                       std::span<const double> input) {
  if (!params.matches(spec)) throw ConfigError("mlp: parameter layout does not match spec");
  return mlp_forward(spec, params.values, input);
}

struct Gradients {
  std::vector<double> params;
  std::vector<double> input;
};

// Gradient of output . output_grad with respect to parameters and input.
inline Gradients mlp_backward(const MlpSpec& spec, std::span<const double> params,
                              std::span<const double> input, std::span<const double> output_grad) {
  if (input.size() != spec.input_dim || output_grad.size() != spec.output_dim) {
    throw ConfigError("mlp: backward dimension mismatch");
  }
  ForwardCache cache;
  Matrix x = Eigen::Map<const Vector>(input.data(), static_cast<Eigen::Index>(input.size()));
  forward_batch(spec, params, x, cache);
  Matrix dy = Eigen::Map<const Vector>(output_grad.data(), static_cast<Eigen::Index>(output_grad.size()));
  Gradients g;
  g.params.assign(params.size(), 0.0);
  Matrix dx;
  backward_batch(spec, params, cache, dy, g.params, &dx);
  g.input.assign(dx.data(), dx.data() + dx.size());
  return g;
}

inline Gradients mlp_backward(const MlpSpec& spec, const ParamVector& params,
                              std::span<const double> input, std::span<const double> output_grad) {
  if (!params.matches(spec)) throw ConfigError("mlp: parameter layout does not match spec");
  return mlp_backward(spec, params.values, input, output_grad);
}

// Packs a list of equal-length vectors as the columns of a matrix.
template <typename Range>
Matrix columns(const Range& vectors, std::size_t rows) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(std::size(vectors)));
  Eigen::Index c = 0;
  for (const auto& v : vectors) {
    if (std::size(v) != rows) throw ConfigError("columns: ragged input");
    m.col(c++) = Eigen::Map<const Vector>(std::data(v), static_cast<Eigen::Index>(rows));
  }
  return m;
}

}  // namespace tnb::nn

#endif  // TNB_NN_MLP_HPP_
