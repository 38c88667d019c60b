#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "shiro/core/types.hpp"
#include "shiro/nn/mlp.hpp"

namespace shiro::policies {

// Two independent Q heads over [state; goal; action].
struct TwinCritic {
  nn::Mlp q1;
  nn::Mlp q2;

  static TwinCritic create(int state_dim, int goal_dim, int action_dim, const std::vector<int>& hidden,
                           std::uint64_t seed);

  int input_dim() const { return q1.input_dim(); }

  double min_q(const Vector& state, const Vector& goal, const Vector& action) const;
  // Row vector of min(q1, q2) per column.
  Vector min_q(const Matrix& states, const Matrix& goals, const Matrix& actions) const;
};

nlohmann::json to_json(const TwinCritic& critic);
TwinCritic twin_critic_from_json(const nlohmann::json& j);

}  // namespace shiro::policies
