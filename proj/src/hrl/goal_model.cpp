#include "shiro/hrl/goal_model.hpp"

#include "shiro/core/error.hpp"

namespace shiro::hrl {

Vector goal_transition(const Vector& state, const Vector& subgoal, const Vector& next_state) {
  require(state.size() == next_state.size() && subgoal.size() <= state.size(),
          "goal_transition: dimension mismatch");
  const auto k = subgoal.size();
  return state.head(k) + subgoal - next_state.head(k);
}

double intrinsic_reward(const Vector& state, const Vector& subgoal, const Vector& next_state, double scale) {
  require(state.size() == next_state.size() && subgoal.size() <= state.size(),
          "intrinsic_reward: dimension mismatch");
  const auto k = subgoal.size();
  return -scale * (state.head(k) + subgoal - next_state.head(k)).norm();
}

double accumulate_abstracted_reward(std::span<const double> env_rewards, double scale) {
  require(!env_rewards.empty(), "accumulate_abstracted_reward: empty reward window");
  double sum = 0.0;
  for (double r : env_rewards) sum += r;
  return scale * sum;
}

}  // namespace shiro::hrl
