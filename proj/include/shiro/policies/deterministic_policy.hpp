#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "shiro/core/rng.hpp"
#include "shiro/core/types.hpp"
#include "shiro/nn/mlp.hpp"

namespace shiro::policies {

// mu(s, g) = action_scale * tanh(net([s; g])), explored with additive
// N(0, diag(exploration_sigma^2)) noise clipped to the action box.
struct DeterministicPolicy {
  nn::Mlp net;
  Vector action_scale;
  Vector exploration_sigma;
  int state_dim = 0;
  int goal_dim = 0;

  static DeterministicPolicy create(int state_dim, int goal_dim, const Vector& action_scale,
                                    const std::vector<int>& hidden, double sigma_fraction,
                                    std::uint64_t seed);

  int action_dim() const { return static_cast<int>(action_scale.size()); }

  Vector action(const Vector& state, const Vector& goal) const;
  // Columns are samples; rows of `states`/`goals` match state_dim/goal_dim.
  Matrix action(const Matrix& states, const Matrix& goals) const;
  Vector explore(const Vector& state, const Vector& goal, Rng& rng) const;

  // Clip each row of `actions` to [-action_scale, action_scale].
  Matrix clip_to_box(Matrix actions) const;
};

nlohmann::json to_json(const DeterministicPolicy& policy);
DeterministicPolicy deterministic_policy_from_json(const nlohmann::json& j);

}  // namespace shiro::policies
