#include "shiro/soft_rl/level_agent.hpp"

#include <cmath>
#include <string>

#include "shiro/core/error.hpp"
#include "shiro/nn/serialize.hpp"

namespace shiro::soft_rl {

using policies::DeterministicPolicy;
using policies::LevelPolicy;
using policies::PolicyKind;
using policies::SquashedGaussianPolicy;
using policies::TwinCritic;

void AgentLevelConfig::validate(const char* level) const {
  const std::string prefix = std::string(level) + ": ";
  if (train_interval <= 0) throw ConfigError(prefix + "train_interval must be positive");
  if (target_update_interval <= 0) throw ConfigError(prefix + "target_update_interval must be positive");
  if (actor_delay <= 0) throw ConfigError(prefix + "actor_delay must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError(prefix + "gamma must lie in (0, 1)");
  if (!(kl_penalty_coefficient >= 0.0)) throw ConfigError(prefix + "alpha_kl must be non-negative");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError(prefix + "tau must lie in [0, 1]");
  if (!(actor_lr > 0.0 && critic_lr > 0.0 && alpha_lr > 0.0)) throw ConfigError(prefix + "learning rates must be positive");
  if (!(alpha_init > 0.0)) throw ConfigError(prefix + "alpha_init must be positive");
  if (batch_size <= 0) throw ConfigError(prefix + "batch_size must be positive");
  if (!(exploration_sigma_fraction > 0.0)) throw ConfigError(prefix + "exploration sigma must be positive");
  if (hidden.empty()) throw ConfigError(prefix + "at least one hidden layer is required");
  for (int h : hidden)
    if (h <= 0) throw ConfigError(prefix + "hidden sizes must be positive");
}

LevelAgent::LevelAgent(const AgentLevelConfig& config, int state_dim, int goal_dim, const Vector& action_scale,
                       std::uint64_t seed)
    : config_(config) {
  const int action_dim = static_cast<int>(action_scale.size());
  if (config.policy_kind == PolicyKind::kDeterministic) {
    policy_ = DeterministicPolicy::create(state_dim, goal_dim, action_scale, config.hidden,
                                          config.exploration_sigma_fraction, seed);
  } else {
    policy_ = SquashedGaussianPolicy::create(state_dim, goal_dim, action_scale, config.hidden, seed);
    temperature_.emplace(config.alpha_init, config.target_entropy.value_or(-static_cast<double>(action_dim)),
                         config.alpha_learnable, config.alpha_lr);
  }
  target_policy_ = policy_;
  critic_ = TwinCritic::create(state_dim, goal_dim, action_dim, config.hidden, seed + 1);
  target_critic_ = critic_;
  actor_opt_ = nn::AdamState::for_size(policies::network(policy_).num_params(), config.actor_lr);
  q1_opt_ = nn::AdamState::for_size(critic_.q1.num_params(), config.critic_lr);
  q2_opt_ = nn::AdamState::for_size(critic_.q2.num_params(), config.critic_lr);
}

TrainStats LevelAgent::train(const Batch& batch, Rng& rng, std::int64_t env_step, const KlPenalty& kl) {
  TrainStats stats;
  const double alpha = temperature_ ? temperature_->alpha() : 0.0;
  const Vector targets =
      compute_critic_target(batch, target_critic_, policy_, target_policy_, alpha, config_.gamma, config_.smoothing, rng);
  stats.critic_loss = update_critics(critic_, q1_opt_, q2_opt_, batch, targets);
  if (!std::isfinite(stats.critic_loss)) {
    throw NumericalAbort("critic loss became non-finite at env step " + std::to_string(env_step));
  }
  ++gradient_steps_;

  if (gradient_steps_ % config_.actor_delay != 0) return stats;

  ActorUpdate update;
  if (temperature_) {
    update = update_actor_sac(policy_, actor_opt_, critic_, batch, temperature_->alpha(), rng, kl);
    if (temperature_->learnable()) {
      temperature_->update(std::span<const double>(update.log_probs.data(), update.log_probs.size()));
    }
  } else {
    update = update_actor_td3(policy_, actor_opt_, critic_, batch, kl);
  }
  if (!std::isfinite(update.loss)) {
    throw NumericalAbort("actor loss became non-finite at env step " + std::to_string(env_step));
  }
  stats.actor_loss = update.loss;
  ++actor_updates_;

  if (env_step % config_.target_update_interval == 0) {
    nn::polyak_update(target_critic_.q1, critic_.q1, config_.tau);
    nn::polyak_update(target_critic_.q2, critic_.q2, config_.tau);
    std::visit(
        [&](auto& target) {
          using P = std::decay_t<decltype(target)>;
          nn::polyak_update(target.net, std::get<P>(policy_).net, config_.tau);
        },
        target_policy_);
  }
  return stats;
}

nlohmann::json LevelAgent::to_json() const {
  nlohmann::json j = {{"policy", policies::to_json(policy_)},
                      {"target_policy", policies::to_json(target_policy_)},
                      {"critic", policies::to_json(critic_)},
                      {"target_critic", policies::to_json(target_critic_)},
                      {"actor_opt", nn::to_json(actor_opt_)},
                      {"q1_opt", nn::to_json(q1_opt_)},
                      {"q2_opt", nn::to_json(q2_opt_)},
                      {"gradient_steps", gradient_steps_},
                      {"actor_updates", actor_updates_}};
  j["temperature"] = temperature_ ? temperature_->to_json() : nlohmann::json(nullptr);
  return j;
}

void LevelAgent::restore(const nlohmann::json& j) {
  try {
    LevelPolicy policy = policies::level_policy_from_json(j.at("policy"));
    LevelPolicy target_policy = policies::level_policy_from_json(j.at("target_policy"));
    if (policies::kind_of(policy) != config_.policy_kind || policies::kind_of(target_policy) != config_.policy_kind)
      throw FormatError("checkpointed policy kind does not match the configuration");
    if (!policies::network(policy).same_shape(policies::network(policy_)))
      throw FormatError("checkpointed policy architecture does not match the configuration");
    TwinCritic critic = policies::twin_critic_from_json(j.at("critic"));
    TwinCritic target_critic = policies::twin_critic_from_json(j.at("target_critic"));
    if (!critic.q1.same_shape(critic_.q1) || !target_critic.q1.same_shape(critic_.q1))
      throw FormatError("checkpointed critic architecture does not match the configuration");
    std::optional<Temperature> temperature;
    if (!j.at("temperature").is_null()) temperature = Temperature::from_json(j.at("temperature"));
    if (temperature.has_value() != temperature_.has_value())
      throw FormatError("checkpointed temperature does not match the policy kind");
    nn::AdamState actor_opt = nn::adam_from_json(j.at("actor_opt"));
    nn::AdamState q1_opt = nn::adam_from_json(j.at("q1_opt"));
    nn::AdamState q2_opt = nn::adam_from_json(j.at("q2_opt"));
    const auto gradient_steps = j.at("gradient_steps").get<std::int64_t>();
    const auto actor_updates = j.at("actor_updates").get<std::int64_t>();

    policy_ = std::move(policy);
    target_policy_ = std::move(target_policy);
    critic_ = std::move(critic);
    target_critic_ = std::move(target_critic);
    actor_opt_ = std::move(actor_opt);
    q1_opt_ = std::move(q1_opt);
    q2_opt_ = std::move(q2_opt);
    temperature_ = std::move(temperature);
    gradient_steps_ = gradient_steps;
    actor_updates_ = actor_updates;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed level agent: ") + e.what());
  }
}

}  // namespace shiro::soft_rl
