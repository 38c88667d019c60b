#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiro/env/environment.hpp"

namespace shiro::env {

struct Rect {
  double x0, y0, x1, y1;
  // Strict interior; positions on a face are outside.
  bool contains(double x, double y) const { return x > x0 && x < x1 && y > y0 && y < y1; }
};

struct PointLayout {
  std::string name;
  Rect arena;
  std::vector<Rect> walls;
  Vector start;
  Vector eval_goal;
  double max_speed = 1.0;
  double success_radius = 2.5;
  int horizon = 500;
};

// The built-in U-shaped maze: arena [-2,18]^2, wall block [-2,10]x[6,10].
PointLayout point_maze_layout();
// Same arena with no walls.
PointLayout point_reach_layout();
// {arena:[w,h] or [x0,y0,x1,y1], walls:[[x0,y0,x1,y1],...], start:[x,y], eval_goal:[x,y]}
PointLayout layout_from_json(const nlohmann::json& j, const std::string& name);
PointLayout load_layout(const std::filesystem::path& path);
// "point_maze", "point_reach" or a path to a layout JSON file.
PointLayout resolve_layout(const std::string& env_name);

// First-order 2-D point mass: position += max_speed * clip(action, -1, 1),
// resolved one axis at a time against the walls and the arena boundary.
class PointEnv final : public Environment {
 public:
  explicit PointEnv(PointLayout layout);

  std::string name() const override { return layout_.name; }
  int state_dim() const override { return 2; }
  int action_dim() const override { return 2; }
  int goal_dim() const override { return 2; }
  Vector action_high() const override { return Vector::Ones(2); }
  int episode_horizon() const override { return layout_.horizon; }

  ResetResult reset(Rng& rng, GoalMode mode) override;
  StepResult step(const Vector& action) override;
  bool is_success(const Vector& state, const Vector& goal) const override;

  Vector state() const override { return position_; }
  Vector goal() const override { return goal_; }
  int elapsed_steps() const override { return elapsed_; }
  void set_state(const Vector& state, const Vector& goal, int elapsed_steps) override;

  std::unique_ptr<Environment> clone() const override { return std::make_unique<PointEnv>(*this); }

  const PointLayout& layout() const { return layout_; }
  bool in_free_space(double x, double y) const;
  Vector sample_free_position(Rng& rng) const;
  std::uint64_t clipped_actions() const { return clipped_actions_; }

 private:
  double move_axis(double from, double delta, double other, bool along_x) const;

  PointLayout layout_;
  Vector position_;
  Vector goal_;
  int elapsed_ = 0;
  std::uint64_t clipped_actions_ = 0;
};

std::unique_ptr<Environment> make_environment(const std::string& env_name);

}  // namespace shiro::env
