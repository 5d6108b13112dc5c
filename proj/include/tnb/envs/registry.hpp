#ifndef TNB_ENVS_REGISTRY_HPP_
#define TNB_ENVS_REGISTRY_HPP_

#include <memory>
#include <string>
#include <vector>

#include "tnb/envs/maze.hpp"
#include "tnb/envs/reacher.hpp"
#include "tnb/json_reader.hpp"

namespace tnb::envs {

inline constexpr const char* kFourWayMaze = "four_way_maze";
inline constexpr const char* kDeceptiveMaze = "deceptive_maze";
inline constexpr const char* kReacher = "reacher";

enum class EnvFamily { four_way, deceptive, reacher };

inline EnvFamily env_family(const std::string& name) {
  if (name == kFourWayMaze) return EnvFamily::four_way;
  if (name == kDeceptiveMaze) return EnvFamily::deceptive;
  if (name == kReacher) return EnvFamily::reacher;
  throw ConfigError("unknown environment '" + name + "' (expected four_way_maze, deceptive_maze or reacher)");
}

namespace detail {

inline std::vector<std::string> art_lines(const MazeGrid& grid) {
  std::vector<std::string> lines;
  const std::string text = grid.to_text();
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

inline MazeConfig maze_from_json(MazeConfig c, const Json& params, const std::string& path) {
  JsonReader r(params, path);
  if (r.has("map")) {
    std::string art;
    for (const auto& line : r.require<std::vector<std::string>>("map")) art += line + "\n";
    c.grid = MazeGrid::parse(art);
  }
  c.cell_size = r.get("cell_size", c.cell_size);
  c.dt = r.get("dt", c.dt);
  c.mass = r.get("mass", c.mass);
  c.force_limit = r.get("force_limit", c.force_limit);
  c.velocity_limit = r.get("velocity_limit", c.velocity_limit);
  c.alive_penalty = r.get("alive_penalty", c.alive_penalty);
  c.wall_penalty = r.get("wall_penalty", c.wall_penalty);
  c.horizon = r.get("horizon", c.horizon);
  c.distance_weight = r.get("distance_weight", c.distance_weight);
  c.goal_bonus = r.get("goal_bonus", c.goal_bonus);
  c.goal_radius = r.get("goal_radius", c.goal_radius);
  r.finish();
  c.validate();
  return c;
}

inline Json maze_to_json(const MazeConfig& c) {
  return {{"map", art_lines(c.grid)},         {"cell_size", c.cell_size},
          {"dt", c.dt},                       {"mass", c.mass},
          {"force_limit", c.force_limit},     {"velocity_limit", c.velocity_limit},
          {"alive_penalty", c.alive_penalty}, {"wall_penalty", c.wall_penalty},
          {"horizon", c.horizon},             {"distance_weight", c.distance_weight},
          {"goal_bonus", c.goal_bonus},       {"goal_radius", c.goal_radius}};
}

inline ReacherConfig reacher_from_json(ReacherConfig c, const Json& params, const std::string& path) {
  JsonReader r(params, path);
  c.link_lengths = r.get("link_lengths", c.link_lengths);
  c.rest_angles = r.get("rest_angles", c.rest_angles);
  c.target_position = r.get("target_position", c.target_position);
  c.link_mass = r.get("link_mass", c.link_mass);
  c.damping = r.get("damping", c.damping);
  c.torque_limit = r.get("torque_limit", c.torque_limit);
  c.torque_cost_weight = r.get("torque_cost_weight", c.torque_cost_weight);
  c.touch_radius = r.get("touch_radius", c.touch_radius);
  c.terminal_bonus = r.get("terminal_bonus", c.terminal_bonus);
  c.dt = r.get("dt", c.dt);
  c.horizon = r.get("horizon", c.horizon);
  r.finish();
  c.validate();
  return c;
}

inline Json reacher_to_json(const ReacherConfig& c) {
  return {{"link_lengths", c.link_lengths},
          {"rest_angles", c.rest_angles},
          {"target_position", c.target_position},
          {"link_mass", c.link_mass},
          {"damping", c.damping},
          {"torque_limit", c.torque_limit},
          {"torque_cost_weight", c.torque_cost_weight},
          {"touch_radius", c.touch_radius},
          {"terminal_bonus", c.terminal_bonus},
          {"dt", c.dt},
          {"horizon", c.horizon}};
}

}  // namespace detail

// Fully resolved parameter object for `name`: built-in defaults overlaid with
// `params`. Unknown keys raise ConfigError.
inline Json resolve_env_params(const std::string& name, const Json& params = Json::object(),
                               const std::string& path = "env.params") {
  switch (env_family(name)) {
    case EnvFamily::four_way: return detail::maze_to_json(detail::maze_from_json(four_way_maze_config(), params, path));
    case EnvFamily::deceptive:
      return detail::maze_to_json(detail::maze_from_json(deceptive_maze_config(), params, path));
    case EnvFamily::reacher: return detail::reacher_to_json(detail::reacher_from_json(ReacherConfig{}, params, path));
  }
  return {};
}

inline std::unique_ptr<Environment> make_env(const std::string& name, const Json& params = Json::object()) {
  switch (env_family(name)) {
    case EnvFamily::four_way:
      return std::make_unique<PointMassMaze>(detail::maze_from_json(four_way_maze_config(), params, "env.params"),
                                             kFourWayMaze);
    case EnvFamily::deceptive:
      return std::make_unique<PointMassMaze>(
          detail::maze_from_json(deceptive_maze_config(), params, "env.params"), kDeceptiveMaze);
    case EnvFamily::reacher:
      return std::make_unique<Reacher>(detail::reacher_from_json(ReacherConfig{}, params, "env.params"));
  }
  return nullptr;
}

}  // namespace tnb::envs

#endif  // TNB_ENVS_REGISTRY_HPP_
