#ifndef TNB_PG_GAE_HPP_
#define TNB_PG_GAE_HPP_

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "tnb/error.hpp"
#include "tnb/pg/value.hpp"
#include "tnb/rollout.hpp"

namespace tnb::pg {

enum class RewardStream { task, novelty };

// Per-step advantages and value targets for one reward stream, flattened
// over the rollouts of a batch in order.
struct AdvantageBatch {
  std::vector<double> advantages;
  std::vector<double> value_targets;
  double gamma = 0.99;
  double lambda = 0.95;
};

// GAE over one episode:
//   delta_t = r_t + gamma V(s_{t+1}) (1 - done_t) - V(s_t)
//   A_t     = delta_t + gamma lambda A_{t+1}
// `bootstrap_value` is V(s_T) for a truncated episode and is ignored when the
// episode terminated.
inline void gae_episode(std::span<const double> rewards, std::span<const double> values, double bootstrap_value,
                        bool terminated, double gamma, double lambda, std::span<double> advantages) {
  const std::size_t n = rewards.size();
  if (values.size() != n || advantages.size() != n) throw ConfigError("gae: length mismatch");
  double next_advantage = 0.0;
  double next_value = terminated ? 0.0 : bootstrap_value;
  for (std::size_t t = n; t-- > 0;) {
    const double delta = rewards[t] + gamma * next_value - values[t];
    next_advantage = delta + gamma * lambda * next_advantage;
    advantages[t] = next_advantage;
    next_value = values[t];
  }
}

// `values[i]` holds V(s_t) for rollout i and `bootstrap[i]` holds V(final_state).
inline AdvantageBatch compute_gae(std::span<const Rollout> rollouts, std::span<const std::vector<double>> rewards,
                                  std::span<const std::vector<double>> values, std::span<const double> bootstrap,
                                  double gamma, double lambda) {
  if (rewards.size() != rollouts.size() || values.size() != rollouts.size() || bootstrap.size() != rollouts.size()) {
    throw ConfigError("gae: per-rollout inputs disagree in count");
  }
  AdvantageBatch batch;
  batch.gamma = gamma;
  batch.lambda = lambda;
  for (std::size_t i = 0; i < rollouts.size(); ++i) {
    const std::size_t n = rollouts[i].length();
    if (rewards[i].size() != n || values[i].size() != n) throw ConfigError("gae: reward/value length mismatch");
    std::vector<double> adv(n);
    gae_episode(rewards[i], values[i], bootstrap[i], rollouts[i].terminated, gamma, lambda, adv);
    for (std::size_t t = 0; t < n; ++t) {
      batch.advantages.push_back(adv[t]);
      batch.value_targets.push_back(adv[t] + values[i][t]);
    }
  }
  return batch;
}

inline const std::vector<double>& stream_rewards(const Rollout& r, RewardStream stream) {
  return stream == RewardStream::task ? r.task_rewards : r.novelty_rewards;
}

// V(s_t) for every step of every rollout, plus V(final_state) per rollout.
inline std::pair<std::vector<std::vector<double>>, std::vector<double>> evaluate_values(
    std::span<const Rollout> rollouts, const ValueFunction& value) {
  std::vector<std::vector<double>> values;
  std::vector<double> bootstrap;
  for (const auto& r : rollouts) {
    std::vector<envs::Observation> obs = r.states;
    obs.push_back(r.final_state);
    const nn::Vector v = value.predict(nn::columns(obs, value.spec.input_dim));
    values.emplace_back(v.data(), v.data() + r.length());
    bootstrap.push_back(v(static_cast<Eigen::Index>(r.length())));
  }
  return {std::move(values), std::move(bootstrap)};
}

inline AdvantageBatch compute_gae(std::span<const Rollout> rollouts, const ValueFunction& value, double gamma,
                                  double lambda, RewardStream stream) {
  auto [values, bootstrap] = evaluate_values(rollouts, value);
  std::vector<std::vector<double>> rewards;
  for (const auto& r : rollouts) rewards.push_back(stream_rewards(r, stream));
  return compute_gae(rollouts, rewards, values, bootstrap, gamma, lambda);
}

// Shifts to zero mean and scales to unit standard deviation. A constant
// vector (including all zeros) maps to all zeros.
inline void normalize_advantages(std::vector<double>& advantages) {
  if (advantages.empty()) return;
  const double n = static_cast<double>(advantages.size());
  const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) / n;
  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / n);
  for (double& a : advantages) a = (a - mean) / (sd + 1e-8);
}

}  // namespace tnb::pg

#endif  // TNB_PG_GAE_HPP_
