#ifndef TNB_PG_SURROGATE_HPP_
#define TNB_PG_SURROGATE_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tnb/pg/policy.hpp"

namespace tnb::pg {

// Minibatch of (observation, action, behavior log-prob), one sample per column.
struct Minibatch {
  Matrix observations;
  Matrix actions;
  std::vector<double> old_log_probs;

  std::size_t size() const { return old_log_probs.size(); }
};

// Evaluates the current policy once on a minibatch and then produces clipped
// surrogate gradients for any number of advantage streams:
//   L(theta) = mean_i min(rho_i A_i, clip(rho_i, 1 - eps, 1 + eps) A_i),
//   rho_i = exp(log pi(a_i | s_i) - log pi_old(a_i | s_i)).
// The entropy term is zero.
class SurrogateEvaluator {
 public:
  SurrogateEvaluator(const GaussianPolicy& policy, const Minibatch& batch) : policy_(policy), batch_(batch) {
    if (batch.observations.cols() != static_cast<Eigen::Index>(batch.size()) ||
        batch.actions.cols() != static_cast<Eigen::Index>(batch.size())) {
      throw ConfigError("surrogate: minibatch column counts disagree");
    }
    if (static_cast<std::size_t>(batch.actions.rows()) != policy.action_dim()) {
      throw ConfigError("surrogate: action dimension mismatch");
    }
    nn::forward_batch(policy.mean_spec, policy.mean_params(), batch.observations, cache_);
    const auto ls = policy.log_std();
    inv_var_.resize(static_cast<Eigen::Index>(ls.size()));
    for (std::size_t j = 0; j < ls.size(); ++j) inv_var_(static_cast<Eigen::Index>(j)) = std::exp(-2.0 * ls[j]);
    diff_ = batch.actions - cache_.output();
    ratios_.resize(static_cast<Eigen::Index>(batch.size()));
    log_probs_.resize(static_cast<Eigen::Index>(batch.size()));
    for (Eigen::Index i = 0; i < diff_.cols(); ++i) {
      double lp = 0.0;
      for (Eigen::Index j = 0; j < diff_.rows(); ++j) {
        lp += -0.5 * diff_(j, i) * diff_(j, i) * inv_var_(j) - ls[static_cast<std::size_t>(j)] - kHalfLog2Pi;
      }
      log_probs_(i) = lp;
      ratios_(i) = std::exp(lp - batch.old_log_probs[static_cast<std::size_t>(i)]);
    }
  }

  const Vector& ratios() const { return ratios_; }
  const Vector& log_probs() const { return log_probs_; }

  double objective(std::span<const double> advantages, double clip) const {
    check(advantages);
    double total = 0.0;
    for (Eigen::Index i = 0; i < ratios_.size(); ++i) {
      const double a = advantages[static_cast<std::size_t>(i)];
      const double r = ratios_(i);
      total += std::min(r * a, std::clamp(r, 1.0 - clip, 1.0 + clip) * a);
    }
    return total / static_cast<double>(ratios_.size());
  }

  // d objective / d (log pi_i): rho_i A_i / B while the unclipped term is the
  // active branch of the min, zero otherwise.
  std::vector<double> log_prob_weights(std::span<const double> advantages, double clip) const {
    check(advantages);
    const double inv_b = 1.0 / static_cast<double>(ratios_.size());
    std::vector<double> w(advantages.size(), 0.0);
    for (Eigen::Index i = 0; i < ratios_.size(); ++i) {
      const double a = advantages[static_cast<std::size_t>(i)];
      const double r = ratios_(i);
      const bool unclipped = r * a <= std::clamp(r, 1.0 - clip, 1.0 + clip) * a;
      if (unclipped) w[static_cast<std::size_t>(i)] = r * a * inv_b;
    }
    return w;
  }

  // Ascent direction of the objective with respect to all policy parameters.
  std::vector<double> gradient(std::span<const double> advantages, double clip) const {
    return gradient_from_weights(log_prob_weights(advantages, clip));
  }

  // sum_i w_i grad log pi(a_i | s_i)
  std::vector<double> gradient_from_weights(std::span<const double> weights) const {
    std::vector<double> grad(policy_.param_count(), 0.0);
    const std::size_t mean_count = policy_.mean_param_count();
    Matrix output_grad = diff_;
    for (Eigen::Index i = 0; i < output_grad.cols(); ++i) {
      output_grad.col(i) = output_grad.col(i).cwiseProduct(inv_var_) * weights[static_cast<std::size_t>(i)];
    }
    nn::backward_batch(policy_.mean_spec, policy_.mean_params(), cache_, output_grad,
                       std::span<double>(grad.data(), mean_count));
    for (Eigen::Index j = 0; j < diff_.rows(); ++j) {
      double g = 0.0;
      for (Eigen::Index i = 0; i < diff_.cols(); ++i) {
        g += weights[static_cast<std::size_t>(i)] * (diff_(j, i) * diff_(j, i) * inv_var_(j) - 1.0);
      }
      grad[mean_count + static_cast<std::size_t>(j)] = g;
    }
    return grad;
  }

 private:
  void check(std::span<const double> advantages) const {
    if (advantages.size() != static_cast<std::size_t>(ratios_.size())) {
      throw ConfigError("surrogate: advantage count does not match minibatch");
    }
  }

  const GaussianPolicy& policy_;
  const Minibatch& batch_;
  nn::ForwardCache cache_;
  Vector inv_var_;
  Matrix diff_;
  Vector ratios_;
  Vector log_probs_;
};

inline std::vector<double> ppo_surrogate_gradient(const GaussianPolicy& policy, const Minibatch& batch,
                                                  std::span<const double> advantages, double clip) {
  return SurrogateEvaluator(policy, batch).gradient(advantages, clip);
}

}  // namespace tnb::pg

#endif  // TNB_PG_SURROGATE_HPP_
