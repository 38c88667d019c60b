#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "shiro/core/rng.hpp"
#include "shiro/core/types.hpp"
#include "shiro/nn/mlp.hpp"

namespace shiro::policies {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
// Squashed samples are kept at least this far (relative) from the box edge.
inline constexpr double kSquashMargin = 1e-12;

// log(1 - tanh(u)^2), evaluated as 2 * (log 2 - u - softplus(-2u)).
double log_one_minus_tanh_sq(double u);
double softplus(double x);

// Diagonal Gaussian over the pre-squash variable u.
struct GaussianHead {
  Vector mean;
  Vector log_std;
};

// a = action_scale * tanh(u), u ~ N(mean(s, g), diag(exp(log_std(s, g))^2)).
// The network emits [mean; raw_log_std]; raw_log_std is clamped to
// [kLogStdMin, kLogStdMax].
struct SquashedGaussianPolicy {
  nn::Mlp net;
  Vector action_scale;
  int state_dim = 0;
  int goal_dim = 0;

  struct Sample {
    Vector action;
    double log_prob = 0.0;
    Vector pre_squash;
  };

  static SquashedGaussianPolicy create(int state_dim, int goal_dim, const Vector& action_scale,
                                       const std::vector<int>& hidden, std::uint64_t seed);

  int action_dim() const { return static_cast<int>(action_scale.size()); }

  GaussianHead head(const Vector& state, const Vector& goal) const;
  // Batched head: returns (mean, log_std), each action_dim x batch.
  std::pair<Matrix, Matrix> head(const Matrix& states, const Matrix& goals) const;

  Sample sample(const Vector& state, const Vector& goal, Rng& rng) const;
  // Requires every |action_i| < action_scale_i; throws DomainError otherwise.
  double log_prob(const Vector& state, const Vector& goal, const Vector& action) const;
  // scale * tanh(mean): the action used when exploration is off.
  Vector mean_action(const Vector& state, const Vector& goal) const;
  Matrix mean_action(const Matrix& states, const Matrix& goals) const;

  // Density of the squashed action expressed through its pre-squash value.
  double log_prob_pre_squash(const GaussianHead& head, const Vector& u) const;
};

nlohmann::json to_json(const SquashedGaussianPolicy& policy);
SquashedGaussianPolicy squashed_policy_from_json(const nlohmann::json& j);

}  // namespace shiro::policies
