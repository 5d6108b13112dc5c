#ifndef TNB_ENVS_MAZE_HPP_
#define TNB_ENVS_MAZE_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tnb/envs/environment.hpp"
#include "tnb/error.hpp"

namespace tnb::envs {

enum class CellKind { empty, floor, goal, wall };

struct Cell {
  CellKind kind = CellKind::empty;
  int path = 0;  // 1..4 for floor and goal cells

  bool operator==(const Cell&) const = default;
};

// Rectangular cell map parsed from text art, one character per cell:
//   '#' wall   '.' empty   'S' start (empty)   '1'..'4' floor of path i
//   'a'..'d' goal of path 1..4
// Row 0 is the first line. World coordinates: x grows with the column,
// y grows with the row, both in units of cell_size.
class MazeGrid {
 public:
  MazeGrid() = default;

  static MazeGrid parse(std::string_view art) {
    MazeGrid grid;
    std::size_t row = 0;
    std::size_t pos = 0;
    while (pos <= art.size()) {
      const std::size_t end = std::min(art.find('\n', pos), art.size());
      std::string_view line = art.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      pos = end + 1;
      if (line.empty()) continue;
      if (grid.cols_ == 0) grid.cols_ = line.size();
      if (line.size() != grid.cols_) {
        throw ConfigError("maze art: row " + std::to_string(row) + " has " + std::to_string(line.size()) +
                          " cells, expected " + std::to_string(grid.cols_));
      }
      for (std::size_t col = 0; col < line.size(); ++col) {
        const char c = line[col];
        Cell cell;
        if (c == '#') {
          cell.kind = CellKind::wall;
        } else if (c == '.') {
          cell.kind = CellKind::empty;
        } else if (c == 'S') {
          if (grid.start_) throw ConfigError("maze art: more than one start cell");
          grid.start_ = {row, col};
        } else if (c >= '1' && c <= '4') {
          cell = {CellKind::floor, c - '0'};
        } else if (c >= 'a' && c <= 'd') {
          cell = {CellKind::goal, c - 'a' + 1};
        } else {
          throw ConfigError(std::string("maze art: unknown cell character '") + c + "'");
        }
        grid.cells_.push_back(cell);
      }
      ++row;
    }
    grid.rows_ = row;
    if (grid.rows_ == 0) throw ConfigError("maze art: empty map");
    if (!grid.start_) throw ConfigError("maze art: no start cell 'S'");
    return grid;
  }

  std::string to_text() const {
    std::string out;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        const Cell& cell = at(r, c);
        char ch = '.';
        if (start_ && start_->first == r && start_->second == c) {
          ch = 'S';
        } else {
          switch (cell.kind) {
            case CellKind::wall: ch = '#'; break;
            case CellKind::empty: ch = '.'; break;
            case CellKind::floor: ch = static_cast<char>('0' + cell.path); break;
            case CellKind::goal: ch = static_cast<char>('a' + cell.path - 1); break;
          }
        }
        out.push_back(ch);
      }
      out.push_back('\n');
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::pair<std::size_t, std::size_t> start() const { return *start_; }

  const Cell& at(std::size_t row, std::size_t col) const { return cells_[row * cols_ + col]; }

  std::size_t count(CellKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [kind](const Cell& c) { return c.kind == kind; }));
  }

  std::vector<std::pair<std::size_t, std::size_t>> cells_of(CellKind kind) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (cells_[i].kind == kind) out.emplace_back(i / cols_, i % cols_);
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Cell> cells_;
  std::optional<std::pair<std::size_t, std::size_t>> start_;
};

enum class MazeRewardMode {
  four_way,   // one-time floor rewards, goal rewards by path rank
  deceptive,  // distance penalty to the single goal, bonus on arrival
};

struct MazeConfig {
  MazeGrid grid;
  MazeRewardMode mode = MazeRewardMode::four_way;
  double cell_size = 1.0;
  double dt = 0.1;
  double mass = 1.0;
  double force_limit = 1.0;
  double velocity_limit = 2.0;
  double alive_penalty = -1.0;
  double wall_penalty = -10.0;
  std::size_t horizon = 500;
  // deceptive mode
  double distance_weight = 0.1;
  double goal_bonus = 500.0;
  double goal_radius = 0.5;

  void validate() const {
    if (cell_size <= 0 || dt <= 0 || mass <= 0 || force_limit <= 0 || velocity_limit <= 0) {
      throw ConfigError("maze: cell_size, dt, mass, force_limit and velocity_limit must be positive");
    }
    if (horizon == 0) throw ConfigError("maze: horizon must be positive");
    const std::size_t goals = grid.count(CellKind::goal);
    if (mode == MazeRewardMode::four_way) {
      if (goals != 4) throw ConfigError("maze: 4-Way Maze needs exactly four goal cells");
      std::vector<int> seen;
      for (auto [r, c] : grid.cells_of(CellKind::goal)) seen.push_back(grid.at(r, c).path);
      std::sort(seen.begin(), seen.end());
      if (seen != std::vector<int>{1, 2, 3, 4}) throw ConfigError("maze: goal paths must be 1, 2, 3, 4");
    } else {
      if (goals != 1) throw ConfigError("maze: D-Maze needs exactly one goal cell");
      if (goal_radius <= 0) throw ConfigError("maze: goal_radius must be positive");
    }
  }
};

// r_floor_i = 50 ((5 - i) / 4)^3
inline double floor_reward(int path) {
  const double f = (5.0 - path) / 4.0;
  return 50.0 * f * f * f;
}

// r_goal_i = 500 ((5 - i) / 4)^3
inline double goal_reward(int path) {
  const double f = (5.0 - path) / 4.0;
  return 500.0 * f * f * f;
}

struct CellEvent {
  CellKind kind = CellKind::empty;
  int path = 0;
  bool first_visit = false;
  bool wall_contact = false;
};

// 4-Way Maze step reward: alive penalty, wall penalty on contact, one-time
// floor reward, goal reward.
inline double maze_reward(const CellEvent& event, const MazeConfig& config) {
  double r = config.alive_penalty;
  if (event.wall_contact) r += config.wall_penalty;
  if (event.kind == CellKind::floor && event.first_visit) r += floor_reward(event.path);
  if (event.kind == CellKind::goal) r += goal_reward(event.path);
  return r;
}

// Point mass on a cell map. Observation (x, y, vx, vy); action is a 2-D force.
class PointMassMaze final : public Environment {
 public:
  explicit PointMassMaze(MazeConfig config, std::string name = "maze")
      : config_(std::move(config)), name_(std::move(name)) {
    config_.validate();
    const auto [sr, sc] = config_.grid.start();
    start_x_ = (static_cast<double>(sc) + 0.5) * config_.cell_size;
    start_y_ = (static_cast<double>(sr) + 0.5) * config_.cell_size;
    if (config_.mode == MazeRewardMode::deceptive) {
      const auto [gr, gc] = config_.grid.cells_of(CellKind::goal).front();
      goal_x_ = (static_cast<double>(gc) + 0.5) * config_.cell_size;
      goal_y_ = (static_cast<double>(gr) + 0.5) * config_.cell_size;
    }
    visited_.assign(config_.grid.rows() * config_.grid.cols(), false);
    reset(0);
  }

  std::string name() const override { return name_; }
  std::size_t observation_dim() const override { return 4; }
  std::size_t action_dim() const override { return 2; }
  std::size_t horizon() const override { return config_.horizon; }
  const MazeConfig& config() const { return config_; }

  Observation reset(std::uint64_t /*seed*/) override {
    x_ = start_x_;
    y_ = start_y_;
    vx_ = vy_ = 0.0;
    steps_ = 0;
    done_ = false;
    std::fill(visited_.begin(), visited_.end(), false);
    return observation();
  }

  StepResult step(std::span<const double> action) override {
    if (done_) throw UsageError("maze: step() after the episode ended; call reset()");
    if (action.size() != 2) throw UsageError("maze: action must have 2 components");
    if (!std::isfinite(action[0]) || !std::isfinite(action[1])) throw UsageError("maze: non-finite action");

    const double fx = std::clamp(action[0], -config_.force_limit, config_.force_limit);
    const double fy = std::clamp(action[1], -config_.force_limit, config_.force_limit);
    vx_ += fx / config_.mass * config_.dt;
    vy_ += fy / config_.mass * config_.dt;
    const double speed = std::hypot(vx_, vy_);
    if (speed > config_.velocity_limit) {
      vx_ *= config_.velocity_limit / speed;
      vy_ *= config_.velocity_limit / speed;
    }

    bool contact = false;
    const double nx = x_ + vx_ * config_.dt;
    if (blocked(nx, y_)) {
      vx_ = 0.0;
      contact = true;
    } else {
      x_ = nx;
    }
    const double ny = y_ + vy_ * config_.dt;
    if (blocked(x_, ny)) {
      vy_ = 0.0;
      contact = true;
    } else {
      y_ = ny;
    }
    ++steps_;

    StepResult result;
    const auto [row, col] = cell_index(x_, y_);
    const Cell& cell = config_.grid.at(row, col);
    result.info[info_keys::kWallContact] = contact ? 1.0 : 0.0;
    result.info[info_keys::kCellKind] = static_cast<double>(cell.kind);
    result.info[info_keys::kGoalIndex] = 0.0;
    result.info[info_keys::kSuccess] = 0.0;

    if (config_.mode == MazeRewardMode::four_way) {
      CellEvent event{cell.kind, cell.path, false, contact};
      if (cell.kind == CellKind::floor) {
        const std::size_t idx = row * config_.grid.cols() + col;
        event.first_visit = !visited_[idx];
        visited_[idx] = true;
      }
      result.task_reward = maze_reward(event, config_);
      if (cell.kind == CellKind::goal) {
        result.terminated = true;
        result.info[info_keys::kGoalIndex] = cell.path;
        result.info[info_keys::kSuccess] = 1.0;
      }
    } else {
      const double dist = std::hypot(x_ - goal_x_, y_ - goal_y_);
      result.info[info_keys::kDistance] = dist;
      result.task_reward = -config_.distance_weight * dist + config_.alive_penalty;
      if (contact) result.task_reward += config_.wall_penalty;
      if (dist < config_.goal_radius) {
        result.task_reward += config_.goal_bonus;
        result.terminated = true;
        result.info[info_keys::kGoalIndex] = 1.0;
        result.info[info_keys::kSuccess] = 1.0;
      }
    }
    result.truncated = !result.terminated && steps_ >= config_.horizon;
    done_ = result.done();
    result.next_observation = observation();
    return result;
  }

  std::unique_ptr<Environment> clone() const override { return std::make_unique<PointMassMaze>(*this); }

  double x() const { return x_; }
  double y() const { return y_; }
  double start_x() const { return start_x_; }
  double start_y() const { return start_y_; }

  // True when the point lies outside the map or inside a wall cell.
  bool blocked(double x, double y) const {
    if (x < 0.0 || y < 0.0) return true;
    const double cx = x / config_.cell_size;
    const double cy = y / config_.cell_size;
    if (cx >= static_cast<double>(config_.grid.cols()) || cy >= static_cast<double>(config_.grid.rows())) {
      return true;
    }
    return config_.grid.at(static_cast<std::size_t>(cy), static_cast<std::size_t>(cx)).kind == CellKind::wall;
  }

 private:
  Observation observation() const { return {x_, y_, vx_, vy_}; }

  std::pair<std::size_t, std::size_t> cell_index(double x, double y) const {
    return {static_cast<std::size_t>(y / config_.cell_size), static_cast<std::size_t>(x / config_.cell_size)};
  }

  MazeConfig config_;
  std::string name_;
  double start_x_ = 0, start_y_ = 0;
  double goal_x_ = 0, goal_y_ = 0;
  double x_ = 0, y_ = 0, vx_ = 0, vy_ = 0;
  std::size_t steps_ = 0;
  bool done_ = false;
  std::vector<bool> visited_;
};

// 11x11 plus-shaped map: four one-cell-wide arms of four floor cells, goal at
// each end. Arms in decreasing reward order: right, down, left, up.
inline constexpr std::string_view kFourWayMazeArt =
    "#####d#####\n"
    "#####4#####\n"
    "#####4#####\n"
    "#####4#####\n"
    "#####4#####\n"
    "c3333S1111a\n"
    "#####2#####\n"
    "#####2#####\n"
    "#####2#####\n"
    "#####2#####\n"
    "#####b#####\n";

// 10x10 world at cell_size 0.5. The agent starts inside a box whose open side
// faces away from the goal; the goal lies behind the closed wall.
inline constexpr std::string_view kDeceptiveMazeArt =
    "....................\n"
    "....................\n"
    "....................\n"
    "....................\n"
    "....................\n"
    "......########......\n"
    "......#.............\n"
    "......#.............\n"
    "......#.............\n"
    "..a...#..S..........\n"
    "......#.............\n"
    "......#.............\n"
    "......#.............\n"
    "......#.............\n"
    "......########......\n"
    "....................\n"
    "....................\n"
    "....................\n"
    "....................\n"
    "....................\n";

inline MazeConfig four_way_maze_config() {
  MazeConfig c;
  c.grid = MazeGrid::parse(kFourWayMazeArt);
  c.mode = MazeRewardMode::four_way;
  return c;
}

inline MazeConfig deceptive_maze_config() {
  MazeConfig c;
  c.grid = MazeGrid::parse(kDeceptiveMazeArt);
  c.mode = MazeRewardMode::deceptive;
  c.cell_size = 0.5;
  c.wall_penalty = 0.0;
  return c;
}

}  // namespace tnb::envs

#endif  // TNB_ENVS_MAZE_HPP_
