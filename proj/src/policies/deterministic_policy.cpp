#include "shiro/policies/deterministic_policy.hpp"

#include <algorithm>

#include "shiro/core/error.hpp"
#include "shiro/nn/serialize.hpp"

namespace shiro::policies {

DeterministicPolicy DeterministicPolicy::create(int state_dim, int goal_dim, const Vector& action_scale,
                                                const std::vector<int>& hidden, double sigma_fraction,
                                                std::uint64_t seed) {
  require((action_scale.array() > 0.0).all(), "action_scale must be positive");
  require(sigma_fraction > 0.0, "exploration sigma must be positive");
  std::vector<int> sizes{state_dim + goal_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(static_cast<int>(action_scale.size()));
  DeterministicPolicy p;
  p.net = nn::init_mlp(sizes, nn::OutputActivation::kTanh, seed);
  p.action_scale = action_scale;
  p.exploration_sigma = sigma_fraction * action_scale;
  p.state_dim = state_dim;
  p.goal_dim = goal_dim;
  return p;
}

Vector DeterministicPolicy::action(const Vector& state, const Vector& goal) const {
  require(state.size() == state_dim && goal.size() == goal_dim, "policy input dimension mismatch");
  return action_scale.cwiseProduct(net.forward(concat(state, goal)));
}

Matrix DeterministicPolicy::action(const Matrix& states, const Matrix& goals) const {
  require(states.rows() == state_dim && goals.rows() == goal_dim && states.cols() == goals.cols(),
          "policy batch dimension mismatch");
  return action_scale.asDiagonal() * net.forward(vstack(states, goals));
}

Vector DeterministicPolicy::explore(const Vector& state, const Vector& goal, Rng& rng) const {
  Vector a = action(state, goal);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a[i] = std::clamp(a[i] + exploration_sigma[i] * rng.normal(), -action_scale[i], action_scale[i]);
  }
  return a;
}

Matrix DeterministicPolicy::clip_to_box(Matrix actions) const {
  for (Eigen::Index j = 0; j < actions.cols(); ++j)
    for (Eigen::Index i = 0; i < actions.rows(); ++i)
      actions(i, j) = std::clamp(actions(i, j), -action_scale[i], action_scale[i]);
  return actions;
}

nlohmann::json to_json(const DeterministicPolicy& policy) {
  return {{"kind", "deterministic"},
          {"network", nn::to_json(policy.net)},
          {"state_dim", policy.state_dim},
          {"goal_dim", policy.goal_dim},
          {"action_scale", std::vector<double>(policy.action_scale.begin(), policy.action_scale.end())},
          {"exploration_sigma",
           std::vector<double>(policy.exploration_sigma.begin(), policy.exploration_sigma.end())}};
}

DeterministicPolicy deterministic_policy_from_json(const nlohmann::json& j) {
  try {
    DeterministicPolicy p;
    p.net = nn::mlp_from_json(j.at("network"));
    p.state_dim = j.at("state_dim").get<int>();
    p.goal_dim = j.at("goal_dim").get<int>();
    const auto scale = j.at("action_scale").get<std::vector<double>>();
    const auto sigma = j.at("exploration_sigma").get<std::vector<double>>();
    p.action_scale = Eigen::Map<const Vector>(scale.data(), static_cast<Eigen::Index>(scale.size()));
    p.exploration_sigma = Eigen::Map<const Vector>(sigma.data(), static_cast<Eigen::Index>(sigma.size()));
    if (p.net.input_dim() != p.state_dim + p.goal_dim || p.net.output_dim() != p.action_dim() ||
        p.exploration_sigma.size() != p.action_scale.size())
      throw FormatError("deterministic policy dimensions are inconsistent");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed deterministic policy: ") + e.what());
  }
}

}  // namespace shiro::policies
