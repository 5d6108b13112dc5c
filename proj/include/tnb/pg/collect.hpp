#ifndef TNB_PG_COLLECT_HPP_
#define TNB_PG_COLLECT_HPP_

#include <vector>

#include "tnb/envs/environment.hpp"
#include "tnb/novelty/reward.hpp"
#include "tnb/pg/policy.hpp"
#include "tnb/rollout.hpp"

namespace tnb::pg {

enum class ActionMode { stochastic, mean };

// Runs one episode to termination or horizon. Novelty rewards are left at zero.
inline Rollout run_episode(const GaussianPolicy& policy, envs::Environment& env, Rng& rng, ActionMode mode) {
  if (env.observation_dim() != policy.observation_dim() || env.action_dim() != policy.action_dim()) {
    throw DimensionError("policy and environment dimensions disagree");
  }
  Rollout r;
  envs::Observation obs = env.reset(rng());
  for (;;) {
    const auto s = mode == ActionMode::stochastic ? policy.sample(obs, rng) : policy.deterministic(obs);
    envs::StepResult step = env.step(s.action);
    r.states.push_back(std::move(obs));
    r.actions.push_back(s.action);
    r.log_probs.push_back(s.log_prob);
    r.task_rewards.push_back(step.task_reward);
    obs = std::move(step.next_observation);
    if (step.done()) {
      r.terminated = step.terminated;
      r.final_info = std::move(step.info);
      break;
    }
  }
  r.final_state = std::move(obs);
  r.novelty_rewards.assign(r.length(), 0.0);
  return r;
}

// Whole episodes until at least `steps_budget` steps are collected; the last
// episode always runs to completion. Each rollout gets novelty rewards from
// `ae_set` (all zero for an empty set).
inline std::vector<Rollout> collect_rollouts(const GaussianPolicy& policy, envs::Environment& env,
                                             const novelty::AutoencoderSet& ae_set,
                                             const novelty::SegmentConfig& segment, std::size_t steps_budget,
                                             Rng& rng, ActionMode mode = ActionMode::stochastic) {
  if (steps_budget == 0) throw ConfigError("collect_rollouts: steps_budget must be positive");
  std::vector<Rollout> rollouts;
  std::size_t total = 0;
  while (total < steps_budget) {
    Rollout r = run_episode(policy, env, rng, mode);
    novelty::annotate_novelty(r, ae_set, segment);
    total += r.length();
    rollouts.push_back(std::move(r));
  }
  return rollouts;
}

}  // namespace tnb::pg

#endif  // TNB_PG_COLLECT_HPP_
