#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "shiro/policies/deterministic_policy.hpp"
#include "shiro/policies/squashed_gaussian_policy.hpp"

namespace shiro::policies {

enum class PolicyKind { kDeterministic, kSquashedGaussian };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

// The policy acting at one level of the hierarchy.
using LevelPolicy = std::variant<DeterministicPolicy, SquashedGaussianPolicy>;

PolicyKind kind_of(const LevelPolicy& policy);
int action_dim(const LevelPolicy& policy);
const Vector& action_scale(const LevelPolicy& policy);
const nn::Mlp& network(const LevelPolicy& policy);

// Behaviour action: Gaussian-perturbed mean or a squashed sample.
Vector exploratory_action(const LevelPolicy& policy, const Vector& state, const Vector& goal, Rng& rng);
// Exploration off: mu(s, g) or scale * tanh(mean).
Vector greedy_action(const LevelPolicy& policy, const Vector& state, const Vector& goal);
Matrix greedy_action(const LevelPolicy& policy, const Matrix& states, const Matrix& goals);

// Sum over columns of the log-likelihood of `actions` under the policy:
// squashed policies use log pi(a | s, g); deterministic policies use
// -||a - mu(s, g)||^2 (isotropic Gaussian noise, constants dropped).
double action_log_likelihood(const LevelPolicy& policy, const Matrix& states, const Matrix& goals,
                             const Matrix& actions);

nlohmann::json to_json(const LevelPolicy& policy);
LevelPolicy level_policy_from_json(const nlohmann::json& j);

}  // namespace shiro::policies
