#pragma once

#include <cstdint>
#include <vector>

#include "shiro/env/environment.hpp"
#include "shiro/hrl/subgoal_scheduler.hpp"
#include "shiro/policies/level_policy.hpp"

namespace shiro::harness {

// Acts in the environment during evaluation.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void begin_episode(const Vector& state, const Vector& goal) = 0;
  virtual Vector act(const Vector& state, const Vector& goal) = 0;
  virtual void observe(const Vector& /*state*/, const Vector& /*next_state*/) {}
};

// Greedy two-level controller.
class HierarchicalController : public Controller {
 public:
  HierarchicalController(const policies::LevelPolicy& high, const policies::LevelPolicy& low, int c);
  void begin_episode(const Vector& state, const Vector& goal) override;
  Vector act(const Vector& state, const Vector& goal) override;
  void observe(const Vector& state, const Vector& next_state) override;

 private:
  const policies::LevelPolicy& high_;
  const policies::LevelPolicy& low_;
  hrl::SubgoalScheduler scheduler_;
};

// Greedy single-level controller conditioned on the episode goal.
class FlatController : public Controller {
 public:
  explicit FlatController(const policies::LevelPolicy& policy) : policy_(policy) {}
  void begin_episode(const Vector&, const Vector&) override {}
  Vector act(const Vector& state, const Vector& goal) override;

 private:
  const policies::LevelPolicy& policy_;
};

// Follows fixed waypoints at full speed, then heads for the goal.
class WaypointController : public Controller {
 public:
  WaypointController(std::vector<Vector> waypoints, double max_action, double switch_radius = 0.5);
  void begin_episode(const Vector& state, const Vector& goal) override;
  Vector act(const Vector& state, const Vector& goal) override;

 private:
  std::vector<Vector> waypoints_;
  double max_action_;
  double switch_radius_;
  std::size_t next_ = 0;
};

// Route around the point_maze wall.
WaypointController point_maze_oracle();

struct EvalResult {
  double success_rate = 0.0;
  double mean_return = 0.0;
  int successes = 0;
  int episodes = 0;
};

// Runs episodes on a copy of `env` with the fixed evaluation goal.
EvalResult evaluate(Controller& controller, const env::Environment& env, int n_episodes, std::uint64_t seed);

}  // namespace shiro::harness
