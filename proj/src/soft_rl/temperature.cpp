#include "shiro/soft_rl/temperature.hpp"

#include <cmath>

#include "shiro/core/error.hpp"
#include "shiro/nn/serialize.hpp"

namespace shiro::soft_rl {

Temperature::Temperature(double alpha_init, double target_entropy, bool learnable, double learning_rate)
    : log_alpha_(std::log(alpha_init)),
      target_entropy_(target_entropy),
      learnable_(learnable),
      optimizer_(nn::AdamState::for_size(1, learning_rate)) {
  require(alpha_init > 0.0, "Temperature: alpha must be positive");
}

double Temperature::gradient(std::span<const double> batch_log_probs) const {
  require(!batch_log_probs.empty(), "Temperature: empty batch");
  double mean_log_prob = 0.0;
  for (double lp : batch_log_probs) mean_log_prob += lp;
  mean_log_prob /= static_cast<double>(batch_log_probs.size());
  return -std::exp(log_alpha_) * (mean_log_prob + target_entropy_);
}

void Temperature::update(std::span<const double> batch_log_probs) {
  if (!learnable_) throw ContractViolation("Temperature::update called on a fixed temperature");
  const double grad = gradient(batch_log_probs);
  nn::adam_step(std::span<double>(&log_alpha_, 1), std::span<const double>(&grad, 1), optimizer_);
}

nlohmann::json Temperature::to_json() const {
  return {{"log_alpha", log_alpha_},
          {"target_entropy", target_entropy_},
          {"learnable", learnable_},
          {"optimizer", nn::to_json(optimizer_)}};
}

Temperature Temperature::from_json(const nlohmann::json& j) {
  try {
    Temperature t;
    t.log_alpha_ = j.at("log_alpha").get<double>();
    t.target_entropy_ = j.at("target_entropy").get<double>();
    t.learnable_ = j.at("learnable").get<bool>();
    t.optimizer_ = nn::adam_from_json(j.at("optimizer"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed temperature: ") + e.what());
  }
}

}  // namespace shiro::soft_rl
