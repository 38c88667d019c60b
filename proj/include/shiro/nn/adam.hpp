#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shiro/nn/mlp.hpp"

namespace shiro::nn {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step_count = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_hat = 1e-8;

  static AdamState for_size(std::size_t n, double learning_rate);
};

// One bias-corrected Adam step: params -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);
void adam_step(Mlp& net, const Gradients& grads, AdamState& state);

}  // namespace shiro::nn
