#include "shiro/policies/twin_critic.hpp"

#include <algorithm>

#include "shiro/core/error.hpp"
#include "shiro/nn/serialize.hpp"

namespace shiro::policies {

TwinCritic TwinCritic::create(int state_dim, int goal_dim, int action_dim, const std::vector<int>& hidden,
                              std::uint64_t seed) {
  std::vector<int> sizes{state_dim + goal_dim + action_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return {nn::init_mlp(sizes, nn::OutputActivation::kIdentity, seed),
          nn::init_mlp(sizes, nn::OutputActivation::kIdentity, seed + 0x9e3779b97f4a7c15ULL)};
}

double TwinCritic::min_q(const Vector& state, const Vector& goal, const Vector& action) const {
  const Vector x = concat(state, goal, action);
  require(x.size() == input_dim(), "min_q: input dimension mismatch");
  return std::min(q1.forward(x)[0], q2.forward(x)[0]);
}

Vector TwinCritic::min_q(const Matrix& states, const Matrix& goals, const Matrix& actions) const {
  const Matrix x = vstack(states, goals, actions);
  require(x.rows() == input_dim(), "min_q: input dimension mismatch");
  return q1.forward(x).cwiseMin(q2.forward(x)).transpose();
}

nlohmann::json to_json(const TwinCritic& critic) {
  return {{"q1", nn::to_json(critic.q1)}, {"q2", nn::to_json(critic.q2)}};
}

TwinCritic twin_critic_from_json(const nlohmann::json& j) {
  try {
    TwinCritic c{nn::mlp_from_json(j.at("q1")), nn::mlp_from_json(j.at("q2"))};
    if (!c.q1.same_shape(c.q2)) throw FormatError("twin critic heads differ in shape");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed critic: ") + e.what());
  }
}

}  // namespace shiro::policies
