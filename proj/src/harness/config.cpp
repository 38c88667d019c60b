#include "shiro/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "shiro/core/error.hpp"

namespace shiro::harness {

using json = nlohmann::json;
using policies::PolicyKind;
using soft_rl::AgentLevelConfig;

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kHiro: return "hiro";
    case Variant::kShiroHl: return "shiro-hl";
    case Variant::kShiroLl: return "shiro-ll";
    case Variant::kShiroBl: return "shiro-bl";
    case Variant::kFlatSac: return "flat-sac";
  }
  return "unknown";
}

Variant variant_from_string(const std::string& name) {
  if (name == "hiro") return Variant::kHiro;
  if (name == "shiro-hl") return Variant::kShiroHl;
  if (name == "shiro-ll") return Variant::kShiroLl;
  if (name == "shiro-bl") return Variant::kShiroBl;
  if (name == "flat-sac") return Variant::kFlatSac;
  throw ConfigError("variant: unknown value '" + name + "' (expected hiro, shiro-hl, shiro-ll, shiro-bl, flat-sac)");
}

std::string to_string(TemperatureMode m) { return m == TemperatureMode::kConst ? "const" : "learned"; }

TemperatureMode temperature_mode_from_string(const std::string& name) {
  if (name == "const") return TemperatureMode::kConst;
  if (name == "learned") return TemperatureMode::kLearned;
  throw ConfigError("temperature mode: unknown value '" + name + "' (expected const or learned)");
}

AgentLevelConfig RunConfig::default_high() {
  AgentLevelConfig high;
  high.alpha_init = 1.0;
  high.train_interval = 10;
  high.target_update_interval = 10;
  high.reward_scale = 0.1;
  return high;
}

PolicyKind RunConfig::high_policy_kind() const {
  return (variant == Variant::kShiroHl || variant == Variant::kShiroBl) ? PolicyKind::kSquashedGaussian
                                                                       : PolicyKind::kDeterministic;
}

PolicyKind RunConfig::low_policy_kind() const {
  return (variant == Variant::kShiroLl || variant == Variant::kShiroBl || variant == Variant::kFlatSac)
             ? PolicyKind::kSquashedGaussian
             : PolicyKind::kDeterministic;
}

AgentLevelConfig RunConfig::high_level_config() const {
  AgentLevelConfig out = high;
  out.policy_kind = high_policy_kind();
  out.alpha_init = alpha_high_init;
  out.alpha_learnable = temperature_mode_high == TemperatureMode::kLearned;
  out.kl_penalty_coefficient = 0.0;
  return out;
}

AgentLevelConfig RunConfig::low_level_config() const {
  AgentLevelConfig out = low;
  out.policy_kind = low_policy_kind();
  out.alpha_init = alpha_low_init;
  out.alpha_learnable = temperature_mode_low == TemperatureMode::kLearned;
  out.kl_penalty_coefficient = hierarchical() ? alpha_kl : 0.0;
  return out;
}

void RunConfig::validate() const {
  if (c <= 0) throw ConfigError("c must be positive");
  if (total_env_steps < 0) throw ConfigError("total_env_steps must be non-negative");
  if (eval_interval < 0) throw ConfigError("eval_interval must be non-negative (0 disables evaluation)");
  if (eval_interval > 0 && eval_interval < c) throw ConfigError("eval_interval must be at least c");
  if (eval_episodes <= 0) throw ConfigError("eval_episodes must be positive");
  if (!(alpha_high_init > 0.0)) throw ConfigError("alpha_high_init must be positive");
  if (!(alpha_low_init > 0.0)) throw ConfigError("alpha_low_init must be positive");
  if (!(alpha_kl >= 0.0)) throw ConfigError("alpha_kl must be non-negative");
  if (!(subgoal_limit > 0.0)) throw ConfigError("subgoal_limit must be positive");
  if (!(relabel_sigma_fraction >= 0.0)) throw ConfigError("relabel_sigma_fraction must be non-negative");
  if (relabel_samples < 0) throw ConfigError("relabel_samples must be non-negative");
  if (replay_capacity <= 0) throw ConfigError("replay_capacity must be positive");
  if (kl_probe_states <= 0) throw ConfigError("kl_probe_states must be positive");
  if (!(stop_at_success >= 0.0 && stop_at_success <= 1.0)) throw ConfigError("stop_at_success must lie in [0, 1]");
  if (checkpoint_interval < 0) throw ConfigError("checkpoint_interval must be non-negative");
  high_level_config().validate("high");
  low_level_config().validate("low");
}

namespace {

json level_to_json(const AgentLevelConfig& c) {
  json j;
  j["train_interval"] = c.train_interval;
  j["target_update_interval"] = c.target_update_interval;
  j["actor_delay"] = c.actor_delay;
  j["gamma"] = c.gamma;
  j["tau"] = c.tau;
  j["actor_lr"] = c.actor_lr;
  j["critic_lr"] = c.critic_lr;
  j["alpha_lr"] = c.alpha_lr;
  j["batch_size"] = c.batch_size;
  j["reward_scale"] = c.reward_scale;
  j["target_noise"] = c.smoothing.noise;
  j["target_noise_clip"] = c.smoothing.noise_clip;
  j["exploration_sigma_fraction"] = c.exploration_sigma_fraction;
  j["hidden"] = c.hidden;
  j["target_entropy"] = c.target_entropy ? json(*c.target_entropy) : json(nullptr);
  return j;
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + key + ": " + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(where + "unknown key '" + key + "'");
  }
}

AgentLevelConfig level_from_json(const json& j, AgentLevelConfig c, const std::string& level) {
  const std::string where = level + ".";
  reject_unknown(j,
                 {"train_interval", "target_update_interval", "actor_delay", "gamma", "tau", "actor_lr", "critic_lr",
                  "alpha_lr", "batch_size", "reward_scale", "target_noise", "target_noise_clip",
                  "exploration_sigma_fraction", "hidden", "target_entropy"},
                 where);
  read(j, "train_interval", c.train_interval, where);
  read(j, "target_update_interval", c.target_update_interval, where);
  read(j, "actor_delay", c.actor_delay, where);
  read(j, "gamma", c.gamma, where);
  read(j, "tau", c.tau, where);
  read(j, "actor_lr", c.actor_lr, where);
  read(j, "critic_lr", c.critic_lr, where);
  read(j, "alpha_lr", c.alpha_lr, where);
  read(j, "batch_size", c.batch_size, where);
  read(j, "reward_scale", c.reward_scale, where);
  read(j, "target_noise", c.smoothing.noise, where);
  read(j, "target_noise_clip", c.smoothing.noise_clip, where);
  read(j, "exploration_sigma_fraction", c.exploration_sigma_fraction, where);
  read(j, "hidden", c.hidden, where);
  if (auto it = j.find("target_entropy"); it != j.end()) {
    if (it->is_null()) {
      c.target_entropy.reset();
    } else if (it->is_number()) {
      c.target_entropy = it->get<double>();
    } else {
      throw ConfigError(where + "target_entropy: expected a number or null");
    }
  }
  return c;
}

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["env_name"] = c.env_name;
  j["variant"] = to_string(c.variant);
  j["temperature_mode_high"] = to_string(c.temperature_mode_high);
  j["temperature_mode_low"] = to_string(c.temperature_mode_low);
  j["alpha_high_init"] = c.alpha_high_init;
  j["alpha_low_init"] = c.alpha_low_init;
  j["c"] = c.c;
  j["total_env_steps"] = c.total_env_steps;
  j["seed"] = c.seed;
  j["eval_interval"] = c.eval_interval;
  j["eval_episodes"] = c.eval_episodes;
  j["alpha_kl"] = c.alpha_kl;
  j["subgoal_limit"] = c.subgoal_limit;
  j["relabel"] = c.relabel;
  j["relabel_sigma_fraction"] = c.relabel_sigma_fraction;
  j["relabel_samples"] = c.relabel_samples;
  j["replay_capacity"] = c.replay_capacity;
  j["kl_probe_states"] = c.kl_probe_states;
  j["stop_at_success"] = c.stop_at_success;
  j["record_wall_time"] = c.record_wall_time;
  j["checkpoint_interval"] = c.checkpoint_interval;
  j["high"] = level_to_json(c.high);
  j["low"] = level_to_json(c.low);
  return j;
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown(j,
                 {"env_name", "variant", "temperature_mode", "temperature_mode_high", "temperature_mode_low",
                  "alpha_high_init", "alpha_low_init", "c", "total_env_steps", "seed", "eval_interval",
                  "eval_episodes", "alpha_kl", "subgoal_limit", "relabel", "relabel_sigma_fraction",
                  "relabel_samples", "replay_capacity", "kl_probe_states", "stop_at_success", "record_wall_time",
                  "checkpoint_interval", "high", "low"},
                 "");
  RunConfig c;
  read(j, "env_name", c.env_name, "");
  std::string text;
  if (j.contains("variant")) {
    read(j, "variant", text, "");
    c.variant = variant_from_string(text);
  }
  // "temperature_mode" sets both levels; per-level keys override it.
  if (j.contains("temperature_mode")) {
    read(j, "temperature_mode", text, "");
    c.temperature_mode_high = c.temperature_mode_low = temperature_mode_from_string(text);
  }
  if (j.contains("temperature_mode_high")) {
    read(j, "temperature_mode_high", text, "");
    c.temperature_mode_high = temperature_mode_from_string(text);
  }
  if (j.contains("temperature_mode_low")) {
    read(j, "temperature_mode_low", text, "");
    c.temperature_mode_low = temperature_mode_from_string(text);
  }
  read(j, "alpha_high_init", c.alpha_high_init, "");
  read(j, "alpha_low_init", c.alpha_low_init, "");
  read(j, "c", c.c, "");
  read(j, "total_env_steps", c.total_env_steps, "");
  read(j, "seed", c.seed, "");
  read(j, "eval_interval", c.eval_interval, "");
  read(j, "eval_episodes", c.eval_episodes, "");
  read(j, "alpha_kl", c.alpha_kl, "");
  read(j, "subgoal_limit", c.subgoal_limit, "");
  read(j, "relabel", c.relabel, "");
  read(j, "relabel_sigma_fraction", c.relabel_sigma_fraction, "");
  read(j, "relabel_samples", c.relabel_samples, "");
  read(j, "replay_capacity", c.replay_capacity, "");
  read(j, "kl_probe_states", c.kl_probe_states, "");
  read(j, "stop_at_success", c.stop_at_success, "");
  read(j, "record_wall_time", c.record_wall_time, "");
  read(j, "checkpoint_interval", c.checkpoint_interval, "");
  if (j.contains("high")) c.high = level_from_json(j.at("high"), c.high, "high");
  if (j.contains("low")) c.low = level_from_json(j.at("low"), c.low, "low");
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace shiro::harness
