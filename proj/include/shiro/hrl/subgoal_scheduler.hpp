#pragma once

#include <cstdint>

#include "shiro/core/types.hpp"

namespace shiro::hrl {

// Tracks the active sub-goal: a fresh one is requested every c steps and in
// between the current one is carried forward by the goal transition model.
class SubgoalScheduler {
 public:
  explicit SubgoalScheduler(int interval);

  int interval() const { return interval_; }
  bool needs_subgoal() const { return !active_; }
  int steps_since_emit() const { return steps_since_emit_; }
  const Vector& current() const { return current_; }
  std::int64_t emitted() const { return emitted_; }

  void emit(const Vector& subgoal);
  // Call once per environment step; returns the sub-goal for the next step.
  const Vector& advance(const Vector& state, const Vector& next_state);
  // Episode boundary: the next step requests a fresh sub-goal.
  void reset() {
    steps_since_emit_ = 0;
    active_ = false;
  }

  void restore(const Vector& current, int steps_since_emit, std::int64_t emitted);

 private:
  int interval_;
  int steps_since_emit_ = 0;
  bool active_ = false;
  std::int64_t emitted_ = 0;
  Vector current_;
};

}  // namespace shiro::hrl
