#include "shiro/hrl/subgoal_scheduler.hpp"

#include "shiro/core/error.hpp"
#include "shiro/hrl/goal_model.hpp"

namespace shiro::hrl {

SubgoalScheduler::SubgoalScheduler(int interval) : interval_(interval) {
  require(interval > 0, "SubgoalScheduler: interval must be positive");
}

void SubgoalScheduler::emit(const Vector& subgoal) {
  require(needs_subgoal(), "SubgoalScheduler::emit: a sub-goal is already active");
  current_ = subgoal;
  active_ = true;
  ++emitted_;
}

const Vector& SubgoalScheduler::advance(const Vector& state, const Vector& next_state) {
  require(active_, "SubgoalScheduler::advance: no active sub-goal");
  current_ = goal_transition(state, current_, next_state);
  steps_since_emit_ = (steps_since_emit_ + 1) % interval_;
  if (steps_since_emit_ == 0) active_ = false;
  return current_;
}

void SubgoalScheduler::restore(const Vector& current, int steps_since_emit, std::int64_t emitted) {
  require(steps_since_emit >= 0 && steps_since_emit < interval_, "SubgoalScheduler::restore: bad counter");
  current_ = current;
  steps_since_emit_ = steps_since_emit;
  active_ = steps_since_emit > 0;
  emitted_ = emitted;
}

}  // namespace shiro::hrl
