#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiro/core/error.hpp"
#include "shiro/diagnostics/kl.hpp"
#include "shiro/diagnostics/theorem1.hpp"
#include "shiro/env/point_env.hpp"
#include "shiro/harness/checkpoint.hpp"
#include "shiro/harness/config.hpp"
#include "shiro/harness/evaluate.hpp"
#include "shiro/harness/plots.hpp"
#include "shiro/harness/trainer.hpp"

namespace {

using json = nlohmann::json;
using namespace shiro;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct TrainArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::string out_dir = "runs/latest";
  std::string resume;
  std::optional<std::int64_t> steps;
};

int run_train(const TrainArgs& args) {
  if (!args.resume.empty()) {
    harness::Trainer trainer = harness::load_checkpoint(args.resume, args.out_dir);
    if (args.steps) trainer.set_total_env_steps(*args.steps);
    std::cerr << "resuming " << harness::to_string(trainer.config().variant) << " at step " << trainer.env_step()
              << '\n';
    trainer.run();
    std::cout << "finished at step " << trainer.env_step() << ", output in " << args.out_dir << '\n';
    return 0;
  }
  harness::RunConfig config =
      args.config_path.empty() ? harness::RunConfig{} : harness::load_run_config(args.config_path);
  if (args.seed) config.seed = *args.seed;
  if (args.variant) config.variant = harness::variant_from_string(*args.variant);
  if (args.steps) config.total_env_steps = *args.steps;
  config.validate();
  harness::Trainer trainer(config, args.out_dir);
  std::cerr << "training " << harness::to_string(config.variant) << " seed " << config.seed << " for "
            << config.total_env_steps << " steps\n";
  trainer.run();
  const auto& metrics = trainer.metrics();
  std::cout << "finished at step " << trainer.env_step();
  if (!metrics.empty()) std::cout << ", last success rate " << metrics.back().success_rate;
  std::cout << ", output in " << args.out_dir << '\n';
  return 0;
}

int run_eval(const std::string& checkpoint, int episodes, std::uint64_t seed) {
  const auto loaded = harness::load_checkpoint_policies(checkpoint);
  const auto env = env::make_environment(loaded.config.env_name);
  harness::EvalResult result;
  if (loaded.high) {
    harness::HierarchicalController controller(*loaded.high, loaded.low, loaded.config.c);
    result = harness::evaluate(controller, *env, episodes, seed);
  } else {
    harness::FlatController controller(loaded.low);
    result = harness::evaluate(controller, *env, episodes, seed);
  }
  json out = {{"checkpoint", checkpoint},
              {"env_step", loaded.env_step},
              {"episodes", result.episodes},
              {"success_rate", result.success_rate},
              {"mean_return", result.mean_return}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_kl_check(const std::string& path_a, const std::string& path_b, std::size_t rollouts, double grid_cell,
                 std::uint64_t seed) {
  const auto a = harness::load_checkpoint_policies(path_a);
  const auto b = harness::load_checkpoint_policies(path_b);
  if (a.config.env_name != b.config.env_name) throw ContractViolation("checkpoints use different environments");
  const auto env = env::make_environment(a.config.env_name);
  Rng rng(seed, 0x6b6c);
  const auto reset = env->clone()->reset(rng, env::GoalMode::kEval);
  // The first sub-goal the older high level would emit from the start state.
  const Vector subgoal = a.high ? policies::greedy_action(*a.high, reset.state, reset.goal) : reset.goal;
  diagnostics::Theorem1Config cfg;
  cfg.c = a.config.c;
  cfg.rollouts = rollouts;
  cfg.grid_cell = grid_cell;
  const auto result = diagnostics::theorem1_check(*env, a.low, b.low, reset.state, subgoal, cfg, rng);
  json out = {{"checkpoint_a", path_a},
              {"checkpoint_b", path_b},
              {"start_state", std::vector<double>(reset.state.data(), reset.state.data() + reset.state.size())},
              {"subgoal", std::vector<double>(subgoal.data(), subgoal.data() + subgoal.size())},
              {"rollouts", result.rollouts},
              {"empirical_tv", result.empirical_tv},
              {"epsilon", result.epsilon},
              {"bound", result.bound},
              {"slack", result.slack},
              {"holds", result.holds},
              {"caveat", result.caveat}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft hierarchical RL training harness"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Run a training job");
  train_cmd->add_option("--config", train.config_path, "JSON run configuration");
  train_cmd->add_option("--seed", train.seed, "Override the config seed");
  train_cmd->add_option("--variant", train.variant, "hiro, shiro-hl, shiro-ll, shiro-bl or flat-sac");
  train_cmd->add_option("--out", train.out_dir, "Output directory")->capture_default_str();
  train_cmd->add_option("--resume", train.resume, "Continue from a checkpoint file")->check(CLI::ExistingFile);
  train_cmd->add_option("--steps", train.steps, "Override total_env_steps");

  std::string eval_checkpoint;
  int eval_episodes = 10;
  std::uint64_t eval_seed = 0;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint greedily");
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--episodes", eval_episodes, "Episodes to run")->capture_default_str()->check(
      CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval_seed, "Evaluation seed")->capture_default_str();

  std::string kl_a, kl_b;
  std::size_t kl_rollouts = 10000;
  double kl_grid = 0.5;
  std::uint64_t kl_seed = 0;
  auto* kl_cmd = app.add_subcommand("kl-check", "Empirical abstract-transition shift between two low policies");
  kl_cmd->add_option("--checkpoint-a", kl_a, "Older checkpoint")->required()->check(CLI::ExistingFile);
  kl_cmd->add_option("--checkpoint-b", kl_b, "Newer checkpoint")->required()->check(CLI::ExistingFile);
  kl_cmd->add_option("--rollouts", kl_rollouts, "Rollouts per policy")->capture_default_str()->check(
      CLI::PositiveNumber);
  kl_cmd->add_option("--grid-cell", kl_grid, "Histogram cell size")->capture_default_str();
  kl_cmd->add_option("--seed", kl_seed, "Rollout seed")->capture_default_str();

  std::string plot_run;
  auto* plot_cmd = app.add_subcommand("export-plots", "Write CSV series for a run directory");
  plot_cmd->add_option("--run", plot_run, "Run directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(train);
    if (*eval_cmd) return run_eval(eval_checkpoint, eval_episodes, eval_seed);
    if (*kl_cmd) return run_kl_check(kl_a, kl_b, kl_rollouts, kl_grid, kl_seed);
    if (*plot_cmd) {
      for (const auto& path : harness::export_plots(plot_run)) std::cout << path.string() << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
