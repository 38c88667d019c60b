#include "shiro/nn/adam.hpp"

#include <cmath>

#include "shiro/core/error.hpp"

namespace shiro::nn {

AdamState AdamState::for_size(std::size_t n, double learning_rate) {
  AdamState state;
  state.first_moment.assign(n, 0.0);
  state.second_moment.assign(n, 0.0);
  state.learning_rate = learning_rate;
  return state;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  require(params.size() == grads.size(), "adam_step: parameter and gradient sizes differ");
  if (state.first_moment.empty() && state.second_moment.empty()) {
    state.first_moment.assign(params.size(), 0.0);
    state.second_moment.assign(params.size(), 0.0);
  }
  require(state.first_moment.size() == params.size() && state.second_moment.size() == params.size(),
          "adam_step: optimizer state sized for a different parameter set");

  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
    v = state.beta2 * v + (1.0 - state.beta2) * grads[i] * grads[i];
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon_hat);
  }
}

void adam_step(Mlp& net, const Gradients& grads, AdamState& state) {
  require(net.same_shape(grads), "adam_step: gradients do not match the network");
  adam_step(net.values(), grads.values(), state);
}

}  // namespace shiro::nn
