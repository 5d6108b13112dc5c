#ifndef TNB_ENVS_REACHER_HPP_
#define TNB_ENVS_REACHER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "tnb/envs/environment.hpp"
#include "tnb/error.hpp"

namespace tnb::envs {

struct ReacherConfig {
  std::vector<double> link_lengths{1.0, 1.0};
  std::vector<double> rest_angles{0.0, 0.0};
  std::array<double, 2> target_position{0.5, 1.2};
  double link_mass = 1.0;
  double damping = 0.1;
  double torque_limit = 1.0;
  double torque_cost_weight = 0.01;
  double touch_radius = 0.1;
  double terminal_bonus = 100.0;
  double dt = 0.1;
  std::size_t horizon = 200;

  void validate() const {
    if (link_lengths.empty()) throw ConfigError("reacher: at least one link is required");
    for (double l : link_lengths) {
      if (l <= 0) throw ConfigError("reacher: link lengths must be positive");
    }
    if (rest_angles.size() != link_lengths.size()) {
      throw ConfigError("reacher: rest_angles must have one entry per link");
    }
    const double reach = std::accumulate(link_lengths.begin(), link_lengths.end(), 0.0);
    if (std::hypot(target_position[0], target_position[1]) > reach) {
      throw ConfigError("reacher: target lies outside the reachable disc");
    }
    if (link_mass <= 0 || torque_limit <= 0 || touch_radius <= 0 || dt <= 0 || damping < 0) {
      throw ConfigError("reacher: mass, torque_limit, touch_radius, dt must be positive, damping >= 0");
    }
    if (torque_cost_weight < 0) throw ConfigError("reacher: torque_cost_weight must be non-negative");
    if (horizon == 0) throw ConfigError("reacher: horizon must be positive");
  }
};

// Tip position of a planar chain with relative joint angles.
inline std::array<double, 2> forward_kinematics(const std::vector<double>& lengths,
                                                const std::vector<double>& angles) {
  double phi = 0.0, x = 0.0, y = 0.0;
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    phi += angles[j];
    x += lengths[j] * std::cos(phi);
    y += lengths[j] * std::sin(phi);
  }
  return {x, y};
}

// Planar n-link arm with decoupled joints: each joint accelerates as
// (tau - damping * qdot) / I, where I = link_mass * length^2 is the link's
// point-mass moment about its own joint. No gravity, semi-implicit Euler.
//
// Observation: sin(q_1..n), cos(q_1..n), qdot_1..n, target - tip.
class Reacher final : public Environment {
 public:
  explicit Reacher(ReacherConfig config) : config_(std::move(config)) {
    config_.validate();
    for (double l : config_.link_lengths) inertia_.push_back(config_.link_mass * l * l);
    reset(0);
  }

  std::string name() const override { return "reacher"; }
  std::size_t observation_dim() const override { return 3 * joints() + 2; }
  std::size_t action_dim() const override { return joints(); }
  std::size_t horizon() const override { return config_.horizon; }
  const ReacherConfig& config() const { return config_; }

  std::size_t joints() const { return config_.link_lengths.size(); }
  const std::vector<double>& angles() const { return q_; }
  const std::vector<double>& velocities() const { return qdot_; }
  std::array<double, 2> tip() const { return forward_kinematics(config_.link_lengths, q_); }
  double inertia(std::size_t joint) const { return inertia_.at(joint); }

  Observation reset(std::uint64_t /*seed*/) override {
    q_ = config_.rest_angles;
    qdot_.assign(joints(), 0.0);
    steps_ = 0;
    done_ = false;
    return observation();
  }

  StepResult step(std::span<const double> action) override {
    if (done_) throw UsageError("reacher: step() after the episode ended; call reset()");
    if (action.size() != joints()) throw UsageError("reacher: action dimension mismatch");
    double torque_sq = 0.0;
    for (std::size_t j = 0; j < joints(); ++j) {
      if (!std::isfinite(action[j])) throw UsageError("reacher: non-finite action");
      const double tau = std::clamp(action[j], -config_.torque_limit, config_.torque_limit);
      torque_sq += tau * tau;
      qdot_[j] += config_.dt * (tau - config_.damping * qdot_[j]) / inertia_[j];
      q_[j] += config_.dt * qdot_[j];
    }
    ++steps_;

    const auto p = tip();
    const double dist = std::hypot(config_.target_position[0] - p[0], config_.target_position[1] - p[1]);
    StepResult result;
    result.task_reward = -dist - config_.torque_cost_weight * torque_sq;
    result.info[info_keys::kDistance] = dist;
    result.info[info_keys::kSuccess] = 0.0;
    if (dist < config_.touch_radius) {
      result.task_reward += config_.terminal_bonus;
      result.terminated = true;
      result.info[info_keys::kSuccess] = 1.0;
    }
    result.truncated = !result.terminated && steps_ >= config_.horizon;
    done_ = result.done();
    result.next_observation = observation();
    return result;
  }

  std::unique_ptr<Environment> clone() const override { return std::make_unique<Reacher>(*this); }

 private:
  Observation observation() const {
    Observation obs;
    obs.reserve(observation_dim());
    for (double q : q_) obs.push_back(std::sin(q));
    for (double q : q_) obs.push_back(std::cos(q));
    for (double w : qdot_) obs.push_back(w);
    const auto p = tip();
    obs.push_back(config_.target_position[0] - p[0]);
    obs.push_back(config_.target_position[1] - p[1]);
    return obs;
  }

  ReacherConfig config_;
  std::vector<double> inertia_;
  std::vector<double> q_;
  std::vector<double> qdot_;
  std::size_t steps_ = 0;
  bool done_ = false;
};

}  // namespace tnb::envs

#endif  // TNB_ENVS_REACHER_HPP_
