#ifndef TNB_NN_ADAM_HPP_
#define TNB_NN_ADAM_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tnb/error.hpp"

namespace tnb::nn {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step_count = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  AdamState() = default;
  AdamState(std::size_t size, double lr) : m(size, 0.0), v(size, 0.0), learning_rate(lr) {}
};

namespace detail {

inline void check_step(std::size_t params, std::size_t tracked, std::span<const double> gradient) {
  if (gradient.size() != params || tracked != params) {
    throw ConfigError("optimizer: gradient length " + std::to_string(gradient.size()) +
                      " != parameter length " + std::to_string(params));
  }
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    if (!std::isfinite(gradient[i])) {
      throw TrainingError("optimizer: non-finite gradient component at index " + std::to_string(i));
    }
  }
}

}  // namespace detail

// Bias-corrected Adam. With `maximize` the update ascends the gradient,
// otherwise it descends. A non-finite gradient leaves params and state intact.
inline void adam_step(AdamState& state, std::span<double> params, std::span<const double> gradient,
                      bool maximize) {
  detail::check_step(params.size(), state.m.size(), gradient);
  if (state.v.size() != state.m.size()) throw ConfigError("adam: corrupt moment buffers");
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  const double sign = maximize ? -1.0 : 1.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = sign * gradient[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

// Plain gradient step, params += lr * g (or -= when descending).
inline void sgd_step(std::span<double> params, std::span<const double> gradient, double lr, bool maximize) {
  detail::check_step(params.size(), params.size(), gradient);
  const double scale = maximize ? lr : -lr;
  for (std::size_t i = 0; i < params.size(); ++i) params[i] += scale * gradient[i];
}

inline bool all_finite(std::span<const double> values) {
  for (double x : values) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace tnb::nn

#endif  // TNB_NN_ADAM_HPP_
