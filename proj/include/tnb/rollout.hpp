#ifndef TNB_ROLLOUT_HPP_
#define TNB_ROLLOUT_HPP_

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "tnb/envs/environment.hpp"

namespace tnb {

// One episode. states[t] is the observation the action at step t was taken
// from; final_state is the observation after the last step. All per-step
// lists have the same length.
struct Rollout {
  std::vector<envs::Observation> states;
  std::vector<std::vector<double>> actions;
  std::vector<double> log_probs;
  std::vector<double> task_rewards;
  std::vector<double> novelty_rewards;
  envs::Observation final_state;
  bool terminated = false;
  std::map<std::string, double> final_info;

  std::size_t length() const { return states.size(); }

  double task_return() const { return std::accumulate(task_rewards.begin(), task_rewards.end(), 0.0); }
  double novelty_return() const {
    return std::accumulate(novelty_rewards.begin(), novelty_rewards.end(), 0.0);
  }

  bool consistent() const {
    const std::size_t n = states.size();
    return actions.size() == n && log_probs.size() == n && task_rewards.size() == n &&
           novelty_rewards.size() == n;
  }
};

}  // namespace tnb

#endif  // TNB_ROLLOUT_HPP_
