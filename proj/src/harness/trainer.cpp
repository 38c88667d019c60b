#include "shiro/harness/trainer.hpp"

#include <cmath>
#include <iomanip>

#include "shiro/core/error.hpp"
#include "shiro/env/point_env.hpp"
#include "shiro/harness/checkpoint.hpp"
#include "shiro/hrl/goal_model.hpp"
#include "shiro/hrl/relabel.hpp"

namespace shiro::harness {

using json = nlohmann::json;
using hrl::GoalConditionedTransition;
using hrl::HighLevelTransition;

namespace {

constexpr std::uint64_t kTrainStream = 0;
constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kProbeStreamBase = std::uint64_t{1} << 48;

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector json_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

json rng_json(const Rng::State& s) {
  return {{"seed", s.seed}, {"stream", s.stream}, {"counter", s.counter}, {"index", s.index}};
}

Rng::State json_rng(const json& j) {
  return {j.at("seed").get<std::uint64_t>(), j.at("stream").get<std::uint64_t>(),
          j.at("counter").get<std::uint64_t>(), j.at("index").get<std::uint32_t>()};
}

// state, goal, action, reward, next_state, next_goal, done packed flat.
json low_transition_json(const GoalConditionedTransition& t) {
  std::vector<double> row;
  auto append = [&row](const Vector& v) { row.insert(row.end(), v.data(), v.data() + v.size()); };
  append(t.state);
  append(t.goal);
  append(t.action);
  row.push_back(t.reward);
  append(t.next_state);
  append(t.next_goal);
  row.push_back(t.done ? 1.0 : 0.0);
  return row;
}

GoalConditionedTransition json_low_transition(const json& j, int s_dim, int g_dim, int a_dim) {
  const auto row = j.get<std::vector<double>>();
  if (row.size() != static_cast<std::size_t>(2 * s_dim + 2 * g_dim + a_dim + 2)) {
    throw FormatError("low-level transition has the wrong length");
  }
  std::size_t pos = 0;
  auto take = [&](int n) {
    Vector v = Eigen::Map<const Vector>(row.data() + pos, n);
    pos += static_cast<std::size_t>(n);
    return v;
  };
  GoalConditionedTransition t;
  t.state = take(s_dim);
  t.goal = take(g_dim);
  t.action = take(a_dim);
  t.reward = row[pos++];
  t.next_state = take(s_dim);
  t.next_goal = take(g_dim);
  t.done = row[pos] != 0.0;
  return t;
}

json high_transition_json(const HighLevelTransition& t) {
  json states = json::array(), actions = json::array();
  for (const Vector& s : t.states) states.push_back(vec_json(s));
  for (const Vector& a : t.actions) actions.push_back(vec_json(a));
  return {{"states", states},       {"actions", actions},
          {"env_rewards", t.env_rewards}, {"subgoal", vec_json(t.subgoal)},
          {"reward", t.reward},       {"episode_goal", vec_json(t.episode_goal)},
          {"done", t.done}};
}

HighLevelTransition json_high_transition(const json& j) {
  HighLevelTransition t;
  for (const json& s : j.at("states")) t.states.push_back(json_vec(s));
  for (const json& a : j.at("actions")) t.actions.push_back(json_vec(a));
  t.env_rewards = j.at("env_rewards").get<std::vector<double>>();
  t.subgoal = json_vec(j.at("subgoal"));
  t.reward = j.at("reward").get<double>();
  t.episode_goal = json_vec(j.at("episode_goal"));
  t.done = j.at("done").get<bool>();
  return t;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, kInitStream);
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= index; ++i) out = rng.next_u64();
  return out;
}

}  // namespace

Trainer::Trainer(const RunConfig& config, std::filesystem::path out_dir) : Trainer(config, std::move(out_dir), false) {}

Trainer::Trainer(const RunConfig& config, std::filesystem::path out_dir, bool resuming)
    : config_(config),
      out_dir_(std::move(out_dir)),
      env_(env::make_environment(config.env_name)),
      rng_(config.seed, kTrainStream),
      low_buffer_(static_cast<std::size_t>(config.replay_capacity)),
      high_buffer_(static_cast<std::size_t>(config.replay_capacity)),
      scheduler_(config.c),
      wall_start_(std::chrono::steady_clock::now()) {
  config_.validate();
  const int s_dim = env_->state_dim();
  if (config_.hierarchical()) {
    const Vector subgoal_high = Vector::Constant(s_dim, config_.subgoal_limit);
    high_.emplace(config_.high_level_config(), s_dim, env_->goal_dim(), subgoal_high, derive_seed(config_.seed, 1));
    low_.emplace(config_.low_level_config(), s_dim, s_dim, env_->action_high(), derive_seed(config_.seed, 2));
  } else {
    low_.emplace(config_.low_level_config(), s_dim, env_->goal_dim(), env_->action_high(),
                 derive_seed(config_.seed, 2));
  }
  if (!resuming) {
    auto reset = env_->reset(rng_, env::GoalMode::kTrain);
    state_ = std::move(reset.state);
    goal_ = std::move(reset.goal);
    if (low_->config().kl_penalty_coefficient > 0.0) kl_anchor_ = low_->policy();
  }
  open_outputs(resuming);
}

void Trainer::open_outputs(bool append) {
  if (out_dir_.empty()) return;
  std::filesystem::create_directories(out_dir_);
  const auto mode = append ? std::ios::app : std::ios::trunc;
  if (!append) {
    std::ofstream(out_dir_ / "metrics.jsonl", std::ios::trunc);
    std::ofstream cfg(out_dir_ / "config.json", std::ios::trunc);
    cfg << harness::to_json(config_).dump(2) << '\n';
  }
  sink_ = MetricsSink(out_dir_ / "metrics.jsonl",
                      metrics_.empty() ? std::nullopt : std::optional<std::int64_t>(metrics_.back().step));
  kl_out_.open(out_dir_ / "kl.csv", std::ios::out | mode);
  positions_out_.open(out_dir_ / "final_positions.csv", std::ios::out | mode);
  if (!kl_out_ || !positions_out_) throw std::runtime_error("cannot open output files in " + out_dir_.string());
  if (!append) {
    diagnostics::write_kl_csv_header(kl_out_);
    diagnostics::FinalPositionLog::write_csv_header(positions_out_);
    kl_out_.flush();
    positions_out_.flush();
  }
}

void Trainer::set_total_env_steps(std::int64_t total) {
  require(total >= 0, "total_env_steps must be non-negative");
  config_.total_env_steps = total;
}

void Trainer::step() {
  if (config_.hierarchical()) {
    hierarchical_step();
  } else {
    flat_step();
  }
  after_step();
}

void Trainer::hierarchical_step() {
  if (scheduler_.needs_subgoal()) {
    Vector subgoal = policies::exploratory_action(high_->policy(), state_, goal_, rng_);
    scheduler_.emit(subgoal);
    window_ = HighLevelTransition{};
    window_.states.push_back(state_);
    window_.subgoal = std::move(subgoal);
    window_.episode_goal = goal_;
  }
  const Vector subgoal = scheduler_.current();
  Vector action = policies::exploratory_action(low_->policy(), state_, subgoal, rng_);
  env::StepResult result = env_->step(action);
  const Vector next_goal = scheduler_.advance(state_, result.next_state);

  // The horizon is a time limit, so transitions keep bootstrapping past it.
  GoalConditionedTransition low;
  low.state = state_;
  low.goal = subgoal;
  low.action = action;
  low.reward = hrl::intrinsic_reward(state_, subgoal, result.next_state, low_->config().reward_scale);
  low.next_state = result.next_state;
  low.next_goal = next_goal;
  low.done = false;
  low_buffer_.push(std::move(low));

  window_.states.push_back(result.next_state);
  window_.actions.push_back(std::move(action));
  window_.env_rewards.push_back(result.reward);
  ++env_step_;
  if (window_.length() == config_.c || result.done) {
    window_.reward = hrl::accumulate_abstracted_reward(window_.env_rewards, high_->config().reward_scale);
    window_.done = false;
    high_buffer_.push(window_);
    ++counters_.high_transitions;
  }
  state_ = std::move(result.next_state);

  train_low();
  train_high();
  if (result.done) end_episode();
}

void Trainer::flat_step() {
  Vector action = policies::exploratory_action(low_->policy(), state_, goal_, rng_);
  env::StepResult result = env_->step(action);
  GoalConditionedTransition t;
  t.state = state_;
  t.goal = goal_;
  t.action = std::move(action);
  t.reward = result.reward * low_->config().reward_scale;
  t.next_state = result.next_state;
  t.next_goal = goal_;
  t.done = false;
  low_buffer_.push(std::move(t));
  ++env_step_;
  state_ = std::move(result.next_state);
  train_low();
  if (result.done) end_episode();
}

soft_rl::Batch Trainer::low_batch(const std::vector<std::size_t>& indices) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  const GoalConditionedTransition& first = low_buffer_.at(indices.front());
  soft_rl::Batch b;
  b.states.resize(first.state.size(), n);
  b.goals.resize(first.goal.size(), n);
  b.actions.resize(first.action.size(), n);
  b.rewards.resize(n);
  b.next_states.resize(first.next_state.size(), n);
  b.next_goals.resize(first.next_goal.size(), n);
  b.dones.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const GoalConditionedTransition& t = low_buffer_.at(indices[static_cast<std::size_t>(i)]);
    b.states.col(i) = t.state;
    b.goals.col(i) = t.goal;
    b.actions.col(i) = t.action;
    b.rewards[i] = t.reward;
    b.next_states.col(i) = t.next_state;
    b.next_goals.col(i) = t.next_goal;
    b.dones[i] = t.done ? 1.0 : 0.0;
  }
  return b;
}

void Trainer::train_low() {
  const auto& cfg = low_->config();
  if (env_step_ % cfg.train_interval != 0) return;
  const auto indices = low_buffer_.sample_indices(static_cast<std::size_t>(cfg.batch_size), rng_);
  const soft_rl::Batch batch = low_batch(indices);
  soft_rl::KlPenalty kl;
  if (kl_anchor_) kl = {&*kl_anchor_, cfg.kl_penalty_coefficient};
  const soft_rl::TrainStats stats = low_->train(batch, rng_, env_step_, kl);
  losses_.critic_low = stats.critic_loss;
  if (stats.actor_loss) losses_.actor_low = *stats.actor_loss;
  ++counters_.low_train_triggers;
}

void Trainer::train_high() {
  const auto& cfg = high_->config();
  if (env_step_ % cfg.train_interval != 0 || high_buffer_.empty()) return;
  const auto indices = high_buffer_.sample_indices(static_cast<std::size_t>(cfg.batch_size), rng_);
  std::vector<const HighLevelTransition*> items;
  items.reserve(indices.size());
  for (std::size_t i : indices) items.push_back(&high_buffer_.at(i));

  std::vector<Vector> subgoals;
  if (config_.relabel) {
    hrl::RelabelParams params;
    params.subgoal_high = policies::action_scale(high_->policy());
    params.sigma_fraction = config_.relabel_sigma_fraction;
    params.num_samples = config_.relabel_samples;
    subgoals = hrl::relabel_batch(items, hrl::likelihood_of(low_->policy()), params, rng_);
  } else {
    for (const HighLevelTransition* t : items) subgoals.push_back(t->subgoal);
  }

  const auto n = static_cast<Eigen::Index>(items.size());
  const int s_dim = env_->state_dim();
  const int g_dim = env_->goal_dim();
  soft_rl::Batch b;
  b.states.resize(s_dim, n);
  b.goals.resize(g_dim, n);
  b.actions.resize(s_dim, n);
  b.rewards.resize(n);
  b.next_states.resize(s_dim, n);
  b.next_goals.resize(g_dim, n);
  b.dones.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const HighLevelTransition& t = *items[static_cast<std::size_t>(i)];
    b.states.col(i) = t.first_state();
    b.goals.col(i) = t.episode_goal;
    b.actions.col(i) = subgoals[static_cast<std::size_t>(i)];
    b.rewards[i] = t.reward;
    b.next_states.col(i) = t.final_state();
    b.next_goals.col(i) = t.episode_goal;
    b.dones[i] = t.done ? 1.0 : 0.0;
  }
  const soft_rl::TrainStats stats = high_->train(b, rng_, env_step_);
  losses_.critic_high = stats.critic_loss;
  if (stats.actor_loss) losses_.actor_high = *stats.actor_loss;
  ++counters_.high_train_triggers;
}

void Trainer::end_episode() {
  final_positions_.record(state_, env_->is_success(state_, goal_));
  if (positions_out_.is_open()) {
    diagnostics::FinalPositionLog::write_csv_row(positions_out_, final_positions_.rows().back());
    positions_out_.flush();
  }
  ++counters_.episodes;
  auto reset = env_->reset(rng_, env::GoalMode::kTrain);
  state_ = std::move(reset.state);
  goal_ = std::move(reset.goal);
  scheduler_.reset();
}

void Trainer::after_step() {
  const int c = config_.c;
  if (kl_anchor_ && env_step_ % c == 0) kl_anchor_ = low_->policy();
  const std::int64_t interval = config_.eval_interval;
  if (interval <= 0) return;
  if ((env_step_ + c) % interval == 0) kl_snapshot_ = low_->policy();
  if (env_step_ % interval == 0) measure_and_evaluate();
}

void Trainer::measure_and_evaluate() {
  MetricsRecord record;
  record.step = env_step_;

  if (kl_snapshot_ && !low_buffer_.empty()) {
    Rng probe_rng(config_.seed, kProbeStreamBase + static_cast<std::uint64_t>(env_step_));
    const auto indices = low_buffer_.sample_indices(static_cast<std::size_t>(config_.kl_probe_states), probe_rng);
    const soft_rl::Batch probes = low_batch(indices);
    const diagnostics::KlStats stats =
        diagnostics::policy_kl_gaussian(*kl_snapshot_, low_->policy(), probes.states, probes.goals);
    record.kl_mean = stats.mean_kl;
    record.kl_max = stats.max_kl;
    kl_records_.push_back(diagnostics::KlRecord::make(env_step_, stats, config_.c));
    if (kl_out_.is_open()) {
      diagnostics::write_kl_csv_row(kl_out_, kl_records_.back());
      kl_out_.flush();
    }
  }

  const EvalResult eval = evaluate_now(config_.eval_episodes,
                                       config_.seed ^ (static_cast<std::uint64_t>(env_step_) * 0x9e3779b97f4a7c15ULL));
  ++counters_.evaluations;
  record.success_rate = eval.success_rate;
  record.mean_return = eval.mean_return;
  record.alpha_high = high_ ? high_->alpha_for_report() : 0.0;
  record.alpha_low = low_->alpha_for_report();
  record.critic_loss_high = losses_.critic_high;
  record.critic_loss_low = losses_.critic_low;
  record.actor_loss_high = losses_.actor_high;
  record.actor_loss_low = losses_.actor_low;
  record.wall_time_s = config_.record_wall_time ? elapsed_wall_time() : 0.0;
  sink_.emit(record);
  metrics_.push_back(record);
  if (config_.stop_at_success > 0.0 && eval.success_rate >= config_.stop_at_success) stopped_ = true;
}

EvalResult Trainer::evaluate_now(int episodes, std::uint64_t seed) const {
  if (high_) {
    HierarchicalController controller(high_->policy(), low_->policy(), config_.c);
    return evaluate(controller, *env_, episodes, seed);
  }
  FlatController controller(low_->policy());
  return evaluate(controller, *env_, episodes, seed);
}

double Trainer::elapsed_wall_time() const {
  return wall_offset_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start_).count();
}

void Trainer::run_until(std::int64_t target) {
  while (env_step_ < target && !stopped_) step();
}

void Trainer::run() {
  const auto checkpoint_interval = config_.checkpoint_interval;
  try {
    while (!finished()) {
      step();
      if (!out_dir_.empty() && checkpoint_interval > 0 && env_step_ % checkpoint_interval == 0) {
        save_checkpoint(*this, out_dir_ / ("checkpoint_" + std::to_string(env_step_) + ".json"));
      }
    }
  } catch (const NumericalAbort& e) {
    write_abort_dump(e.what());
    throw;
  }
  if (!out_dir_.empty()) save_checkpoint(*this, out_dir_ / "checkpoint.json");
}

void Trainer::write_abort_dump(const std::string& message) const {
  if (out_dir_.empty()) return;
  json dump;
  dump["message"] = message;
  dump["env_step"] = env_step_;
  dump["episodes"] = counters_.episodes;
  dump["state"] = vec_json(state_);
  dump["goal"] = vec_json(goal_);
  dump["critic_loss_high"] = losses_.critic_high;
  dump["critic_loss_low"] = losses_.critic_low;
  dump["actor_loss_high"] = losses_.actor_high;
  dump["actor_loss_low"] = losses_.actor_low;
  dump["alpha_high"] = high_ ? high_->alpha_for_report() : 0.0;
  dump["alpha_low"] = low_->alpha_for_report();
  dump["config"] = harness::to_json(config_);
  std::ofstream(out_dir_ / "abort_dump.json") << dump.dump(2) << '\n';
}

json Trainer::to_json() const {
  json j;
  j["version"] = kCheckpointVersion;
  j["config"] = harness::to_json(config_);
  j["env_step"] = env_step_;
  j["stopped"] = stopped_;
  j["rng"] = rng_json(rng_.state());
  j["env"] = {{"state", vec_json(env_->state())},
              {"goal", vec_json(env_->goal())},
              {"elapsed", env_->elapsed_steps()}};
  j["state"] = vec_json(state_);
  j["goal"] = vec_json(goal_);
  j["high"] = high_ ? high_->to_json() : json(nullptr);
  j["low"] = low_->to_json();
  j["scheduler"] = {{"current", vec_json(scheduler_.current())},
                    {"steps_since_emit", scheduler_.steps_since_emit()},
                    {"emitted", scheduler_.emitted()}};
  j["window"] = window_.states.empty() ? json(nullptr) : high_transition_json(window_);

  json low_items = json::array();
  for (std::size_t i = 0; i < low_buffer_.size(); ++i) low_items.push_back(low_transition_json(low_buffer_.at(i)));
  j["low_buffer"] = {{"write_position", low_buffer_.write_position()}, {"items", std::move(low_items)}};
  json high_items = json::array();
  for (std::size_t i = 0; i < high_buffer_.size(); ++i) high_items.push_back(high_transition_json(high_buffer_.at(i)));
  j["high_buffer"] = {{"write_position", high_buffer_.write_position()}, {"items", std::move(high_items)}};

  j["kl_snapshot"] = kl_snapshot_ ? policies::to_json(*kl_snapshot_) : json(nullptr);
  j["kl_anchor"] = kl_anchor_ ? policies::to_json(*kl_anchor_) : json(nullptr);
  j["losses"] = {{"critic_high", losses_.critic_high},
                 {"critic_low", losses_.critic_low},
                 {"actor_high", losses_.actor_high},
                 {"actor_low", losses_.actor_low}};
  j["counters"] = {{"high_train_triggers", counters_.high_train_triggers},
                   {"low_train_triggers", counters_.low_train_triggers},
                   {"high_transitions", counters_.high_transitions},
                   {"episodes", counters_.episodes},
                   {"evaluations", counters_.evaluations}};
  json metrics = json::array();
  for (const MetricsRecord& r : metrics_) metrics.push_back(harness::to_json(r));
  j["metrics"] = std::move(metrics);
  json kl = json::array();
  for (const auto& r : kl_records_) kl.push_back({r.env_step, r.mean_kl, r.max_kl, r.pinsker_epsilon, r.bound_2ec});
  j["kl_records"] = std::move(kl);
  json positions = json::array();
  for (const auto& r : final_positions_.rows()) positions.push_back({r.episode, r.x, r.y, r.success});
  j["final_positions"] = std::move(positions);
  j["wall_time_s"] = config_.record_wall_time ? elapsed_wall_time() : 0.0;
  return j;
}

Trainer Trainer::from_json(const json& j, std::filesystem::path out_dir) {
  try {
    if (!j.is_object() || !j.contains("version")) throw FormatError("checkpoint has no version field");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw FormatError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kCheckpointVersion) + ")");
    }
    RunConfig config;
    try {
      config = run_config_from_json(j.at("config"));
    } catch (const ConfigError& e) {
      throw FormatError(std::string("checkpoint config is invalid: ") + e.what());
    }
    // Output files are only opened once everything has been parsed.
    Trainer t(config, {}, true);
    const int s_dim = t.env_->state_dim();
    const int low_goal_dim = config.hierarchical() ? s_dim : t.env_->goal_dim();
    const int a_dim = t.env_->action_dim();

    t.env_step_ = j.at("env_step").get<std::int64_t>();
    t.stopped_ = j.at("stopped").get<bool>();
    t.rng_ = Rng(json_rng(j.at("rng")));
    const json& env_j = j.at("env");
    t.env_->set_state(json_vec(env_j.at("state")), json_vec(env_j.at("goal")), env_j.at("elapsed").get<int>());
    t.state_ = json_vec(j.at("state"));
    t.goal_ = json_vec(j.at("goal"));
    if (t.high_) {
      if (j.at("high").is_null()) throw FormatError("checkpoint lacks the high-level agent");
      t.high_->restore(j.at("high"));
    }
    t.low_->restore(j.at("low"));
    const json& sched = j.at("scheduler");
    t.scheduler_.restore(json_vec(sched.at("current")), sched.at("steps_since_emit").get<int>(),
                         sched.at("emitted").get<std::int64_t>());
    if (!j.at("window").is_null()) t.window_ = json_high_transition(j.at("window"));

    std::vector<GoalConditionedTransition> low_items;
    for (const json& item : j.at("low_buffer").at("items"))
      low_items.push_back(json_low_transition(item, s_dim, low_goal_dim, a_dim));
    t.low_buffer_.restore(std::move(low_items), j.at("low_buffer").at("write_position").get<std::size_t>());
    std::vector<HighLevelTransition> high_items;
    for (const json& item : j.at("high_buffer").at("items")) high_items.push_back(json_high_transition(item));
    t.high_buffer_.restore(std::move(high_items), j.at("high_buffer").at("write_position").get<std::size_t>());

    if (!j.at("kl_snapshot").is_null()) t.kl_snapshot_ = policies::level_policy_from_json(j.at("kl_snapshot"));
    if (!j.at("kl_anchor").is_null()) t.kl_anchor_ = policies::level_policy_from_json(j.at("kl_anchor"));
    const json& losses = j.at("losses");
    t.losses_ = {losses.at("critic_high").get<double>(), losses.at("critic_low").get<double>(),
                 losses.at("actor_high").get<double>(), losses.at("actor_low").get<double>()};
    const json& counters = j.at("counters");
    t.counters_.high_train_triggers = counters.at("high_train_triggers").get<std::int64_t>();
    t.counters_.low_train_triggers = counters.at("low_train_triggers").get<std::int64_t>();
    t.counters_.high_transitions = counters.at("high_transitions").get<std::int64_t>();
    t.counters_.episodes = counters.at("episodes").get<std::int64_t>();
    t.counters_.evaluations = counters.at("evaluations").get<std::int64_t>();
    for (const json& r : j.at("metrics")) t.metrics_.push_back(metrics_record_from_json(r));
    for (const json& r : j.at("kl_records")) {
      t.kl_records_.push_back({r.at(0).get<std::int64_t>(), r.at(1).get<double>(), r.at(2).get<double>(),
                               r.at(3).get<double>(), r.at(4).get<double>()});
    }
    std::vector<diagnostics::FinalPositionLog::Row> rows;
    for (const json& r : j.at("final_positions")) {
      rows.push_back({r.at(0).get<std::int64_t>(), r.at(1).get<double>(), r.at(2).get<double>(), r.at(3).get<bool>()});
    }
    t.final_positions_.restore(std::move(rows));
    t.wall_offset_ = j.at("wall_time_s").get<double>();
    t.wall_start_ = std::chrono::steady_clock::now();

    t.out_dir_ = std::move(out_dir);
    t.open_outputs(true);
    return t;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("inconsistent checkpoint: ") + e.what());
  }
}

}  // namespace shiro::harness
