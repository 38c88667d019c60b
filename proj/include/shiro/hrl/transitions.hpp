#pragma once

#include <vector>

#include "shiro/core/types.hpp"

namespace shiro::hrl {

struct GoalConditionedTransition {
  Vector state;
  Vector goal;
  Vector action;
  double reward = 0.0;
  Vector next_state;
  Vector next_goal;
  bool done = false;
};

// One sub-goal window. Holds the full state/action sequence so the sub-goal
// can be relabelled against the current low-level policy.
struct HighLevelTransition {
  std::vector<Vector> states;   // s_t .. s_{t+k}, k <= c
  std::vector<Vector> actions;  // a_t .. a_{t+k-1}
  std::vector<double> env_rewards;
  Vector subgoal;
  double reward = 0.0;  // reward_scale_high * sum(env_rewards)
  Vector episode_goal;
  bool done = false;

  int length() const { return static_cast<int>(actions.size()); }
  const Vector& first_state() const { return states.front(); }
  const Vector& final_state() const { return states.back(); }
};

}  // namespace shiro::hrl
