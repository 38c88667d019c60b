#include "shiro/policies/level_policy.hpp"

#include <cmath>

#include "shiro/core/error.hpp"

namespace shiro::policies {

std::string to_string(PolicyKind kind) {
  return kind == PolicyKind::kDeterministic ? "deterministic" : "squashed_gaussian";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "deterministic") return PolicyKind::kDeterministic;
  if (name == "squashed_gaussian") return PolicyKind::kSquashedGaussian;
  throw FormatError("unknown policy kind '" + name + "'");
}

PolicyKind kind_of(const LevelPolicy& policy) {
  return std::holds_alternative<DeterministicPolicy>(policy) ? PolicyKind::kDeterministic
                                                             : PolicyKind::kSquashedGaussian;
}

int action_dim(const LevelPolicy& policy) {
  return std::visit([](const auto& p) { return p.action_dim(); }, policy);
}

const Vector& action_scale(const LevelPolicy& policy) {
  return std::visit([](const auto& p) -> const Vector& { return p.action_scale; }, policy);
}

const nn::Mlp& network(const LevelPolicy& policy) {
  return std::visit([](const auto& p) -> const nn::Mlp& { return p.net; }, policy);
}

Vector exploratory_action(const LevelPolicy& policy, const Vector& state, const Vector& goal, Rng& rng) {
  if (const auto* det = std::get_if<DeterministicPolicy>(&policy)) return det->explore(state, goal, rng);
  return std::get<SquashedGaussianPolicy>(policy).sample(state, goal, rng).action;
}

Vector greedy_action(const LevelPolicy& policy, const Vector& state, const Vector& goal) {
  if (const auto* det = std::get_if<DeterministicPolicy>(&policy)) return det->action(state, goal);
  return std::get<SquashedGaussianPolicy>(policy).mean_action(state, goal);
}

Matrix greedy_action(const LevelPolicy& policy, const Matrix& states, const Matrix& goals) {
  if (const auto* det = std::get_if<DeterministicPolicy>(&policy)) return det->action(states, goals);
  return std::get<SquashedGaussianPolicy>(policy).mean_action(states, goals);
}

double action_log_likelihood(const LevelPolicy& policy, const Matrix& states, const Matrix& goals,
                             const Matrix& actions) {
  require(actions.rows() == action_dim(policy) && actions.cols() == states.cols(),
          "action_log_likelihood: action batch shape mismatch");
  if (const auto* det = std::get_if<DeterministicPolicy>(&policy)) {
    return -(actions - det->action(states, goals)).squaredNorm();
  }
  const auto& sq = std::get<SquashedGaussianPolicy>(policy);
  const auto [mean, log_std] = sq.head(states, goals);
  double total = 0.0;
  Vector u(sq.action_dim());
  for (Eigen::Index j = 0; j < actions.cols(); ++j) {
    for (int i = 0; i < sq.action_dim(); ++i) {
      const double t = actions(i, j) / sq.action_scale[i];
      if (!(std::abs(t) < 1.0)) throw DomainError("action_log_likelihood: action outside the open box");
      u[i] = std::atanh(t);
    }
    total += sq.log_prob_pre_squash({mean.col(j), log_std.col(j)}, u);
  }
  return total;
}

nlohmann::json to_json(const LevelPolicy& policy) {
  return std::visit([](const auto& p) { return to_json(p); }, policy);
}

LevelPolicy level_policy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw FormatError("policy JSON lacks a kind");
  if (policy_kind_from_string(j.at("kind").get<std::string>()) == PolicyKind::kDeterministic)
    return deterministic_policy_from_json(j);
  return squashed_policy_from_json(j);
}

}  // namespace shiro::policies
