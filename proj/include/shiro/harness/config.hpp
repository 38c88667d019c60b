#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "shiro/soft_rl/level_agent.hpp"

namespace shiro::harness {

enum class Variant { kHiro, kShiroHl, kShiroLl, kShiroBl, kFlatSac };
enum class TemperatureMode { kConst, kLearned };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);
std::string to_string(TemperatureMode m);
TemperatureMode temperature_mode_from_string(const std::string& name);

struct RunConfig {
  std::string env_name = "point_maze";
  Variant variant = Variant::kShiroHl;
  TemperatureMode temperature_mode_high = TemperatureMode::kLearned;
  TemperatureMode temperature_mode_low = TemperatureMode::kConst;
  double alpha_high_init = 1.0;
  double alpha_low_init = 0.1;
  int c = 10;
  std::int64_t total_env_steps = 300000;
  std::uint64_t seed = 0;
  std::int64_t eval_interval = 5000;
  int eval_episodes = 10;
  double alpha_kl = 0.0;
  double subgoal_limit = 10.0;
  double relabel_sigma_fraction = 0.5;
  int relabel_samples = 8;
  bool relabel = true;
  std::int64_t replay_capacity = 200000;
  int kl_probe_states = 256;
  // Stop once an evaluation reaches this success rate; 0 disables.
  double stop_at_success = 0.0;
  bool record_wall_time = true;
  std::int64_t checkpoint_interval = 0;
  // policy_kind, alpha_init, alpha_learnable and kl_penalty_coefficient are
  // overwritten from the variant and the fields above.
  soft_rl::AgentLevelConfig high = default_high();
  soft_rl::AgentLevelConfig low = soft_rl::AgentLevelConfig{};

  static soft_rl::AgentLevelConfig default_high();

  bool hierarchical() const { return variant != Variant::kFlatSac; }
  policies::PolicyKind high_policy_kind() const;
  policies::PolicyKind low_policy_kind() const;
  soft_rl::AgentLevelConfig high_level_config() const;
  soft_rl::AgentLevelConfig low_level_config() const;

  // Throws ConfigError listing the offending field.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
// Unknown keys are rejected with ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

}  // namespace shiro::harness
