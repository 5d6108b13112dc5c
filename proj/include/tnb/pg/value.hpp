#ifndef TNB_PG_VALUE_HPP_
#define TNB_PG_VALUE_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tnb/nn/adam.hpp"
#include "tnb/nn/mlp.hpp"
#include "tnb/random.hpp"

namespace tnb::pg {

// State-value network. The network regresses targets in normalized units;
// predictions are scale * net(s) + shift. rescale() moves (shift, scale) to new
// target statistics while adjusting the output layer so that predictions are
// unchanged, which keeps regression well conditioned when returns are in the
// hundreds.
struct ValueFunction {
  nn::MlpSpec spec;
  std::vector<double> params;
  double shift = 0.0;
  double scale = 1.0;

  static ValueFunction create(std::size_t observation_dim, std::vector<std::size_t> hidden, Rng& rng) {
    ValueFunction v;
    v.spec = {observation_dim, std::move(hidden), 1, nn::Activation::tanh, nn::Activation::linear};
    v.params = nn::init_params(v.spec, rng);
    return v;
  }

  nn::Vector predict(const nn::Matrix& observations) const {
    const nn::Matrix raw = nn::forward_batch(spec, params, observations);
    return (scale * raw.row(0).transpose().array() + shift).matrix();
  }

  double predict(std::span<const double> observation) const {
    return scale * nn::mlp_forward(spec, params, observation)[0] + shift;
  }

  void rescale(double new_shift, double new_scale) {
    const auto last = spec.layout().back();
    const double ratio = scale / new_scale;
    for (std::size_t i = 0; i < last.weight_count(); ++i) params[last.offset + i] *= ratio;
    double& bias = params[last.offset + last.weight_count()];
    bias = (scale * bias + shift - new_shift) / new_scale;
    shift = new_shift;
    scale = new_scale;
  }
};

// Exponential moving statistics of value targets, used to drive rescale().
struct TargetStatistics {
  double mean = 0.0;
  double second = 1.0;
  double rate = 0.1;
  bool initialized = false;

  void update(std::span<const double> targets) {
    if (targets.empty()) return;
    double m = 0.0, s = 0.0;
    for (double t : targets) {
      m += t;
      s += t * t;
    }
    m /= static_cast<double>(targets.size());
    s /= static_cast<double>(targets.size());
    if (!initialized) {
      mean = m;
      second = s;
      initialized = true;
    } else {
      mean += rate * (m - mean);
      second += rate * (s - second);
    }
  }

  double stddev() const { return std::max(std::sqrt(std::max(second - mean * mean, 0.0)), 1e-4); }
};

// Minibatch MSE regression step; returns the loss before the update.
inline double value_regression_step(ValueFunction& value, const nn::Matrix& observations,
                                    std::span<const double> targets, nn::AdamState& adam,
                                    nn::ForwardCache& cache, std::vector<double>& grad) {
  nn::forward_batch(value.spec, value.params, observations, cache);
  const auto b = cache.output().cols();
  nn::Matrix residual(1, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    residual(0, i) = cache.output()(0, i) - (targets[static_cast<std::size_t>(i)] - value.shift) / value.scale;
  }
  grad.assign(value.params.size(), 0.0);
  nn::backward_batch(value.spec, value.params, cache, (2.0 / static_cast<double>(b)) * residual, grad);
  if (!nn::all_finite(grad)) throw TrainingError("non-finite value gradient");
  nn::adam_step(adam, value.params, grad, /*maximize=*/false);
  return residual.squaredNorm() / static_cast<double>(b);
}

}  // namespace tnb::pg

#endif  // TNB_PG_VALUE_HPP_
