#ifndef TNB_ENVS_ENVIRONMENT_HPP_
#define TNB_ENVS_ENVIRONMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tnb::envs {

using Observation = std::vector<double>;

struct StepResult {
  Observation next_observation;
  double task_reward = 0.0;
  bool terminated = false;  // task-defined end (goal reached, target touched)
  bool truncated = false;   // horizon reached without termination
  std::map<std::string, double> info;

  bool done() const { return terminated || truncated; }
};

// Episodic, deterministic environment. After an episode ends (terminated or
// truncated) step() throws UsageError until reset() is called.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual std::size_t observation_dim() const = 0;
  virtual std::size_t action_dim() const = 0;
  virtual std::size_t horizon() const = 0;

  virtual Observation reset(std::uint64_t seed) = 0;
  virtual StepResult step(std::span<const double> action) = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

// Outcome labels shared by the evaluation code.
namespace info_keys {
inline constexpr const char* kGoalIndex = "goal_index";  // 4-Way Maze arm, 0 when none
inline constexpr const char* kSuccess = "success";
inline constexpr const char* kWallContact = "wall_contact";
inline constexpr const char* kCellKind = "cell_kind";
inline constexpr const char* kDistance = "distance";
}  // namespace info_keys

}  // namespace tnb::envs

#endif  // TNB_ENVS_ENVIRONMENT_HPP_
