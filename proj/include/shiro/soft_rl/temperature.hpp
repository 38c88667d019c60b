#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include <json.hpp>

#include "shiro/nn/adam.hpp"

namespace shiro::soft_rl {

inline constexpr double kDefaultAlphaLearningRate = 3e-4;

// Entropy coefficient alpha = exp(log_alpha), optionally learned towards a
// target entropy by minimising E[-alpha * (log pi + target_entropy)].
class Temperature {
 public:
  Temperature() = default;
  Temperature(double alpha_init, double target_entropy, bool learnable,
              double learning_rate = kDefaultAlphaLearningRate);

  // Counted read, used by the update rules.
  double alpha() const {
    ++reads_;
    return std::exp(log_alpha_);
  }
  // Uncounted read for reporting.
  double peek() const { return std::exp(log_alpha_); }
  double log_alpha() const { return log_alpha_; }
  double target_entropy() const { return target_entropy_; }
  bool learnable() const { return learnable_; }
  std::uint64_t reads() const { return reads_; }
  const nn::AdamState& optimizer() const { return optimizer_; }

  // dJ/dlog_alpha = alpha * (H_batch - target_entropy), H_batch = -mean(log pi).
  double gradient(std::span<const double> batch_log_probs) const;
  // One Adam step on log_alpha. Throws ContractViolation when not learnable.
  void update(std::span<const double> batch_log_probs);

  nlohmann::json to_json() const;
  static Temperature from_json(const nlohmann::json& j);

 private:
  double log_alpha_ = 0.0;
  double target_entropy_ = 0.0;
  bool learnable_ = false;
  nn::AdamState optimizer_;
  mutable std::uint64_t reads_ = 0;
};

}  // namespace shiro::soft_rl
