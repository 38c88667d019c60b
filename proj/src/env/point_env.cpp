#include "shiro/env/point_env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "shiro/core/error.hpp"

namespace shiro::env {
namespace {

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

Vector vec2_from_json(const nlohmann::json& j, const char* what) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw ConfigError(std::string(what) + " must have two entries");
  return vec2(v[0], v[1]);
}

}  // namespace

PointLayout point_maze_layout() {
  PointLayout l;
  l.name = "point_maze";
  l.arena = {-2.0, -2.0, 18.0, 18.0};
  l.walls = {{-2.0, 6.0, 10.0, 10.0}};
  l.start = vec2(0.0, 0.0);
  l.eval_goal = vec2(0.0, 16.0);
  return l;
}

PointLayout point_reach_layout() {
  PointLayout l = point_maze_layout();
  l.name = "point_reach";
  l.walls.clear();
  return l;
}

PointLayout layout_from_json(const nlohmann::json& j, const std::string& name) {
  try {
    PointLayout l;
    l.name = name;
    const auto arena = j.at("arena").get<std::vector<double>>();
    if (arena.size() == 2) {
      l.arena = {0.0, 0.0, arena[0], arena[1]};
    } else if (arena.size() == 4) {
      l.arena = {arena[0], arena[1], arena[2], arena[3]};
    } else {
      throw ConfigError("arena must be [w,h] or [x0,y0,x1,y1]");
    }
    if (!(l.arena.x1 > l.arena.x0 && l.arena.y1 > l.arena.y0)) throw ConfigError("arena has no area");
    for (const auto& w : j.value("walls", nlohmann::json::array())) {
      const auto r = w.get<std::vector<double>>();
      if (r.size() != 4 || !(r[2] > r[0] && r[3] > r[1])) throw ConfigError("wall must be [x0,y0,x1,y1]");
      l.walls.push_back({r[0], r[1], r[2], r[3]});
    }
    l.start = vec2_from_json(j.at("start"), "start");
    l.eval_goal = vec2_from_json(j.at("eval_goal"), "eval_goal");
    PointEnv probe(l);
    if (!probe.in_free_space(l.start[0], l.start[1])) throw ConfigError("start lies inside a wall or outside the arena");
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed maze layout: ") + e.what());
  }
}

PointLayout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open maze layout " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse maze layout " + path.string() + ": " + e.what());
  }
  return layout_from_json(j, path.stem().string());
}

PointLayout resolve_layout(const std::string& env_name) {
  if (env_name == "point_maze") return point_maze_layout();
  if (env_name == "point_reach") return point_reach_layout();
  return load_layout(env_name);
}

PointEnv::PointEnv(PointLayout layout)
    : layout_(std::move(layout)), position_(layout_.start), goal_(layout_.eval_goal) {}

bool PointEnv::in_free_space(double x, double y) const {
  const Rect& a = layout_.arena;
  if (x < a.x0 || x > a.x1 || y < a.y0 || y > a.y1) return false;
  return std::none_of(layout_.walls.begin(), layout_.walls.end(),
                      [&](const Rect& w) { return w.contains(x, y); });
}

Vector PointEnv::sample_free_position(Rng& rng) const {
  const Rect& a = layout_.arena;
  for (;;) {
    const double x = rng.uniform(a.x0, a.x1);
    const double y = rng.uniform(a.y0, a.y1);
    if (in_free_space(x, y)) return vec2(x, y);
  }
}

ResetResult PointEnv::reset(Rng& rng, GoalMode mode) {
  position_ = layout_.start;
  goal_ = mode == GoalMode::kEval ? layout_.eval_goal : sample_free_position(rng);
  elapsed_ = 0;
  return {position_, goal_};
}

double PointEnv::move_axis(double from, double delta, double other, bool along_x) const {
  double to = from + delta;
  for (const Rect& w : layout_.walls) {
    const double lo = along_x ? w.x0 : w.y0;
    const double hi = along_x ? w.x1 : w.y1;
    const double olo = along_x ? w.y0 : w.x0;
    const double ohi = along_x ? w.y1 : w.x1;
    if (!(other > olo && other < ohi)) continue;
    if (from <= lo && to > lo) to = lo;
    if (from >= hi && to < hi) to = hi;
  }
  const double lo = along_x ? layout_.arena.x0 : layout_.arena.y0;
  const double hi = along_x ? layout_.arena.x1 : layout_.arena.y1;
  return std::clamp(to, lo, hi);
}

StepResult PointEnv::step(const Vector& action) {
  require(action.size() == 2, "step: action must be two-dimensional");
  if (!action.allFinite()) throw ContractViolation("step: non-finite action");
  Vector a = action;
  if ((a.array().abs() > 1.0).any()) {
    if (clipped_actions_++ == 0) {
      std::clog << "warning: " << layout_.name << ": action outside [-1, 1] clipped (further clips not logged)\n";
    }
    a = a.cwiseMax(-1.0).cwiseMin(1.0);
  }
  const double x = move_axis(position_[0], a[0] * layout_.max_speed, position_[1], true);
  const double y = move_axis(position_[1], a[1] * layout_.max_speed, x, false);
  position_ = vec2(x, y);
  ++elapsed_;
  return {position_, -(position_ - goal_).norm(), elapsed_ >= layout_.horizon};
}

bool PointEnv::is_success(const Vector& state, const Vector& goal) const {
  return (state.head(2) - goal.head(2)).norm() < layout_.success_radius;
}

void PointEnv::set_state(const Vector& state, const Vector& goal, int elapsed_steps) {
  require(state.size() == 2 && goal.size() == 2, "set_state: dimension mismatch");
  require(in_free_space(state[0], state[1]), "set_state: position is not in free space");
  position_ = state;
  goal_ = goal;
  elapsed_ = elapsed_steps;
}

std::unique_ptr<Environment> make_environment(const std::string& env_name) {
  return std::make_unique<PointEnv>(resolve_layout(env_name));
}

}  // namespace shiro::env
