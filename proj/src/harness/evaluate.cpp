#include "shiro/harness/evaluate.hpp"

#include <algorithm>

#include "shiro/core/error.hpp"

namespace shiro::harness {

HierarchicalController::HierarchicalController(const policies::LevelPolicy& high, const policies::LevelPolicy& low,
                                               int c)
    : high_(high), low_(low), scheduler_(c) {}

void HierarchicalController::begin_episode(const Vector&, const Vector&) { scheduler_.reset(); }

Vector HierarchicalController::act(const Vector& state, const Vector& goal) {
  if (scheduler_.needs_subgoal()) scheduler_.emit(policies::greedy_action(high_, state, goal));
  return policies::greedy_action(low_, state, scheduler_.current());
}

void HierarchicalController::observe(const Vector& state, const Vector& next_state) {
  scheduler_.advance(state, next_state);
}

Vector FlatController::act(const Vector& state, const Vector& goal) {
  return policies::greedy_action(policy_, state, goal);
}

WaypointController::WaypointController(std::vector<Vector> waypoints, double max_action, double switch_radius)
    : waypoints_(std::move(waypoints)), max_action_(max_action), switch_radius_(switch_radius) {}

void WaypointController::begin_episode(const Vector&, const Vector&) { next_ = 0; }

Vector WaypointController::act(const Vector& state, const Vector& goal) {
  while (next_ < waypoints_.size() && (waypoints_[next_] - state).norm() < switch_radius_) ++next_;
  const Vector target = next_ < waypoints_.size() ? waypoints_[next_] : goal;
  return (target - state).cwiseMax(-max_action_).cwiseMin(max_action_);
}

WaypointController point_maze_oracle() {
  return WaypointController({Vector{{14.0, 2.0}}, Vector{{14.0, 14.0}}, Vector{{0.0, 14.0}}}, 1.0);
}

EvalResult evaluate(Controller& controller, const env::Environment& env, int n_episodes, std::uint64_t seed) {
  require(n_episodes >= 1, "evaluate needs at least one episode");
  auto sim = env.clone();
  Rng rng(seed, 0x6576616c);
  EvalResult result;
  result.episodes = n_episodes;
  double total_return = 0.0;
  for (int ep = 0; ep < n_episodes; ++ep) {
    auto [state, goal] = sim->reset(rng, env::GoalMode::kEval);
    controller.begin_episode(state, goal);
    bool done = false;
    while (!done) {
      const Vector action = controller.act(state, goal);
      env::StepResult step = sim->step(action);
      controller.observe(state, step.next_state);
      total_return += step.reward;
      state = std::move(step.next_state);
      done = step.done;
    }
    if (sim->is_success(state, goal)) ++result.successes;
  }
  result.success_rate = static_cast<double>(result.successes) / n_episodes;
  result.mean_return = total_return / n_episodes;
  return result;
}

}  // namespace shiro::harness
