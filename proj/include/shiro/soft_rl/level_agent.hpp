#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "shiro/soft_rl/temperature.hpp"
#include "shiro/soft_rl/updates.hpp"

namespace shiro::soft_rl {

struct AgentLevelConfig {
  policies::PolicyKind policy_kind = policies::PolicyKind::kDeterministic;
  double alpha_init = 0.1;
  bool alpha_learnable = false;
  int train_interval = 1;          // env steps between gradient steps
  int target_update_interval = 1;  // env steps; gates the Polyak update
  int actor_delay = 2;             // gradient steps between actor updates
  double gamma = 0.99;
  double kl_penalty_coefficient = 0.0;
  double tau = 0.005;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double alpha_lr = kDefaultAlphaLearningRate;
  int batch_size = 128;
  double reward_scale = 1.0;
  TargetSmoothing smoothing;
  double exploration_sigma_fraction = 0.1;
  std::vector<int> hidden = {64, 64};
  // Defaults to -action_dim.
  std::optional<double> target_entropy;

  void validate(const char* level) const;
};

struct TrainStats {
  double critic_loss = 0.0;
  std::optional<double> actor_loss;
};

// Actor, twin critic, their targets and optimisers, plus the temperature for
// squashed-Gaussian levels. Deterministic levels carry no temperature at all.
class LevelAgent {
 public:
  LevelAgent(const AgentLevelConfig& config, int state_dim, int goal_dim, const Vector& action_scale,
             std::uint64_t seed);

  const AgentLevelConfig& config() const { return config_; }
  const policies::LevelPolicy& policy() const { return policy_; }
  policies::LevelPolicy& mutable_policy() { return policy_; }
  const policies::LevelPolicy& target_policy() const { return target_policy_; }
  const policies::TwinCritic& critic() const { return critic_; }
  const policies::TwinCritic& target_critic() const { return target_critic_; }
  const std::optional<Temperature>& temperature() const { return temperature_; }
  std::int64_t gradient_steps() const { return gradient_steps_; }
  std::int64_t actor_updates() const { return actor_updates_; }

  // Current alpha for reporting; 0 for deterministic levels.
  double alpha_for_report() const { return temperature_ ? temperature_->peek() : 0.0; }

  // One gradient step: critics always; actor, temperature and targets every
  // actor_delay steps. Throws NumericalAbort on a non-finite loss.
  TrainStats train(const Batch& batch, Rng& rng, std::int64_t env_step, const KlPenalty& kl = {});

  nlohmann::json to_json() const;
  void restore(const nlohmann::json& j);

 private:
  AgentLevelConfig config_;
  policies::LevelPolicy policy_;
  policies::LevelPolicy target_policy_;
  policies::TwinCritic critic_;
  policies::TwinCritic target_critic_;
  nn::AdamState actor_opt_;
  nn::AdamState q1_opt_;
  nn::AdamState q2_opt_;
  std::optional<Temperature> temperature_;
  std::int64_t gradient_steps_ = 0;
  std::int64_t actor_updates_ = 0;
};

}  // namespace shiro::soft_rl
