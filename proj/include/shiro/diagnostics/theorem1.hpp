#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "shiro/core/rng.hpp"
#include "shiro/env/environment.hpp"
#include "shiro/policies/level_policy.hpp"

namespace shiro::diagnostics {

// Draws a low-level action for (state, sub-goal).
using ActionSampler = std::function<Vector(const Vector& state, const Vector& subgoal, Rng& rng)>;

ActionSampler sampler_of(const policies::LevelPolicy& policy);

struct Theorem1Config {
  int c = 10;
  std::size_t rollouts = 10000;
  double grid_cell = 0.5;
  double delta = 0.01;
};

struct Theorem1Result {
  double empirical_tv = 0.0;
  double epsilon = 0.0;
  double bound = 0.0;  // 2 * epsilon * c
  double slack = 0.0;  // 3 * sqrt(ln(2 / delta) / (2 n))
  bool holds = false;
  std::size_t rollouts = 0;
  std::string caveat;
};

// 3 * sqrt(ln(2 / delta) / (2 n)).
double tv_slack(std::size_t rollouts, double delta);

// Rolls c steps from (start_state, subgoal) under each sampler `rollouts`
// times, advancing the sub-goal with the goal transition model, and compares
// the histograms of s_{t+c} on a grid. `epsilon` is the per-step policy
// distance supplied by the caller.
Theorem1Result theorem1_check(const env::Environment& env, const ActionSampler& old_policy,
                              const ActionSampler& new_policy, const Vector& start_state, const Vector& subgoal,
                              double epsilon, const Theorem1Config& config, Rng& rng);

// Same check for two policy snapshots; epsilon = pinsker_epsilon of the
// largest policy KL over the (state, sub-goal) pairs visited by the rollouts.
// That is a lower estimate of the supremum over all states, which the result
// caveat records.
Theorem1Result theorem1_check(const env::Environment& env, const policies::LevelPolicy& old_policy,
                              const policies::LevelPolicy& new_policy, const Vector& start_state,
                              const Vector& subgoal, const Theorem1Config& config, Rng& rng);

}  // namespace shiro::diagnostics
