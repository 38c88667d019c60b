#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "shiro/diagnostics/final_positions.hpp"
#include "shiro/diagnostics/kl.hpp"
#include "shiro/env/environment.hpp"
#include "shiro/harness/config.hpp"
#include "shiro/harness/evaluate.hpp"
#include "shiro/harness/metrics.hpp"
#include "shiro/hrl/replay_buffer.hpp"
#include "shiro/hrl/subgoal_scheduler.hpp"
#include "shiro/hrl/transitions.hpp"
#include "shiro/soft_rl/level_agent.hpp"

namespace shiro::harness {

struct TrainerCounters {
  std::int64_t high_train_triggers = 0;
  std::int64_t low_train_triggers = 0;
  std::int64_t high_transitions = 0;
  std::int64_t episodes = 0;
  std::int64_t evaluations = 0;
};

struct LastLosses {
  double critic_high = 0.0;
  double critic_low = 0.0;
  double actor_high = 0.0;
  double actor_low = 0.0;
};

// Runs the two-level training loop (or the flat baseline) one environment
// step at a time. With an output directory it streams metrics.jsonl, kl.csv
// and final_positions.csv and writes checkpoints there.
class Trainer {
 public:
  explicit Trainer(const RunConfig& config, std::filesystem::path out_dir = {});

  // Rebuilds a trainer from checkpoint JSON; output files are appended to.
  static Trainer from_json(const nlohmann::json& j, std::filesystem::path out_dir = {});
  nlohmann::json to_json() const;

  Trainer(Trainer&&) = default;
  Trainer& operator=(Trainer&&) = default;

  const RunConfig& config() const { return config_; }
  // Overrides the step budget, e.g. to extend a resumed run.
  void set_total_env_steps(std::int64_t total);

  std::int64_t env_step() const { return env_step_; }
  bool stopped() const { return stopped_; }
  bool finished() const { return stopped_ || env_step_ >= config_.total_env_steps; }

  void step();
  void run_until(std::int64_t env_step);
  // Runs to completion, writing periodic and final checkpoints when an output
  // directory is set. On NumericalAbort an abort_dump.json is written first.
  void run();

  EvalResult evaluate_now(int episodes, std::uint64_t seed) const;

  const std::vector<MetricsRecord>& metrics() const { return metrics_; }
  const std::vector<diagnostics::KlRecord>& kl_records() const { return kl_records_; }
  const diagnostics::FinalPositionLog& final_positions() const { return final_positions_; }
  const TrainerCounters& counters() const { return counters_; }
  const LastLosses& last_losses() const { return losses_; }
  const soft_rl::LevelAgent* high() const { return high_ ? &*high_ : nullptr; }
  const soft_rl::LevelAgent& low() const { return *low_; }
  const env::Environment& environment() const { return *env_; }
  const hrl::ReplayBuffer<hrl::GoalConditionedTransition>& low_buffer() const { return low_buffer_; }
  const hrl::ReplayBuffer<hrl::HighLevelTransition>& high_buffer() const { return high_buffer_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }

 private:
  Trainer(const RunConfig& config, std::filesystem::path out_dir, bool resuming);

  void hierarchical_step();
  void flat_step();
  void train_low();
  void train_high();
  void end_episode();
  void after_step();
  void measure_and_evaluate();
  double elapsed_wall_time() const;
  void open_outputs(bool append);
  void write_abort_dump(const std::string& message) const;

  soft_rl::Batch low_batch(const std::vector<std::size_t>& indices) const;

  RunConfig config_;
  std::filesystem::path out_dir_;
  std::unique_ptr<env::Environment> env_;
  Rng rng_;
  std::optional<soft_rl::LevelAgent> high_;
  std::optional<soft_rl::LevelAgent> low_;
  hrl::ReplayBuffer<hrl::GoalConditionedTransition> low_buffer_;
  hrl::ReplayBuffer<hrl::HighLevelTransition> high_buffer_;
  hrl::SubgoalScheduler scheduler_;
  hrl::HighLevelTransition window_;
  Vector state_;
  Vector goal_;
  std::int64_t env_step_ = 0;
  bool stopped_ = false;

  // Low policy c steps before the next evaluation, for the KL measurement.
  std::optional<policies::LevelPolicy> kl_snapshot_;
  // Low policy at the last multiple of c, anchoring the KL penalty.
  std::optional<policies::LevelPolicy> kl_anchor_;

  LastLosses losses_;
  TrainerCounters counters_;
  std::vector<MetricsRecord> metrics_;
  std::vector<diagnostics::KlRecord> kl_records_;
  diagnostics::FinalPositionLog final_positions_;

  double wall_offset_ = 0.0;
  std::chrono::steady_clock::time_point wall_start_;
  MetricsSink sink_;
  std::ofstream kl_out_;
  std::ofstream positions_out_;
};

}  // namespace shiro::harness
