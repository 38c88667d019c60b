#pragma once

#include <memory>
#include <string>

#include "shiro/core/rng.hpp"
#include "shiro/core/types.hpp"

namespace shiro::env {

enum class GoalMode { kTrain, kEval };

struct StepResult {
  Vector next_state;
  double reward = 0.0;
  bool done = false;
};

struct ResetResult {
  Vector state;
  Vector goal;
};

// Goal-conditioned episodic environment (S, G, A, P_T, R) with a goal
// distribution P_g. Actions live in the box [-action_high, action_high].
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual int goal_dim() const = 0;
  virtual Vector action_high() const = 0;
  virtual int episode_horizon() const = 0;

  virtual ResetResult reset(Rng& rng, GoalMode mode) = 0;
  virtual StepResult step(const Vector& action) = 0;
  virtual bool is_success(const Vector& state, const Vector& goal) const = 0;

  virtual Vector state() const = 0;
  virtual Vector goal() const = 0;
  virtual int elapsed_steps() const = 0;
  // Place the agent at an arbitrary state with the given goal and step count.
  virtual void set_state(const Vector& state, const Vector& goal, int elapsed_steps) = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

}  // namespace shiro::env
