#pragma once

#include <span>

#include "shiro/core/types.hpp"

namespace shiro::hrl {

// h(s_t, g_t, s_{t+1}) = s_t + g_t - s_{t+1}. Goals cover a prefix of the
// state dimensions.
Vector goal_transition(const Vector& state, const Vector& subgoal, const Vector& next_state);

// -scale * ||s_t + g_t - s_{t+1}||_2 over the goal dimensions.
double intrinsic_reward(const Vector& state, const Vector& subgoal, const Vector& next_state,
                        double scale = 1.0);

// scale * sum of the environment rewards collected in one sub-goal window.
double accumulate_abstracted_reward(std::span<const double> env_rewards, double scale);

}  // namespace shiro::hrl
