#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shiro/core/error.hpp"
#include "shiro/diagnostics/kl.hpp"
#include "shiro/diagnostics/theorem1.hpp"
#include "shiro/env/point_env.hpp"
#include "shiro/harness/checkpoint.hpp"
#include "shiro/harness/config.hpp"
#include "shiro/harness/metrics.hpp"
#include "shiro/harness/trainer.hpp"
#include "shiro/hrl/goal_model.hpp"
#include "shiro/hrl/relabel.hpp"
#include "shiro/soft_rl/temperature.hpp"
#include "shiro/soft_rl/updates.hpp"
#include "support.hpp"

using namespace shiro;
namespace fs = std::filesystem;
using policies::DeterministicPolicy;
using policies::LevelPolicy;
using policies::SquashedGaussianPolicy;
using policies::TwinCritic;
using shiro::testing::central_difference;
using shiro::testing::gradient_error;
using shiro::testing::random_matrix;
using shiro::testing::random_vector;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

template <typename Params>
void randomise(Params& p, Rng& rng, double range) {
  for (double& v : p.values()) v = rng.uniform(-range, range);
}

std::vector<int> random_hidden(Rng& rng) {
  std::vector<int> h(1 + rng.below(2));
  for (int& n : h) n = 3 + static_cast<int>(rng.below(6));
  return h;
}

soft_rl::Batch random_batch(Rng& rng, int n, double action_scale) {
  soft_rl::Batch b;
  b.states = random_matrix(rng, 2, n, -2.0, 2.0);
  b.goals = random_matrix(rng, 2, n, -2.0, 2.0);
  b.actions = random_matrix(rng, 2, n, -0.99 * action_scale, 0.99 * action_scale);
  b.rewards = random_vector(rng, n, -5.0, 0.0);
  b.next_states = random_matrix(rng, 2, n, -2.0, 2.0);
  b.next_goals = random_matrix(rng, 2, n, -2.0, 2.0);
  b.dones = Vector::Zero(n);
  return b;
}

// Worst gradient error over every parameter of `params`.
double worst_over(std::span<const double> analytic, std::span<double> params, const std::function<double()>& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i)
    worst = std::max(worst, gradient_error(analytic[i], central_difference(f, params[i])));
  return worst;
}

Outcome criterion1() {
  constexpr int kCases = 100;
  Rng rng(101);
  std::map<std::string, double> worst;

  for (int k = 0; k < kCases; ++k) {
    std::vector<int> sizes{1 + static_cast<int>(rng.below(4))};
    for (int h : random_hidden(rng)) sizes.push_back(h);
    sizes.push_back(1 + static_cast<int>(rng.below(3)));
    nn::Mlp net(sizes, k % 2 ? nn::OutputActivation::kTanh : nn::OutputActivation::kIdentity);
    randomise(net, rng, 0.8);
    const Matrix x = random_matrix(rng, sizes.front(), 3);
    const Matrix up = random_matrix(rng, sizes.back(), 3);
    nn::Mlp::Tape tape;
    net.forward(x, tape);
    nn::Gradients g = net.make_gradients();
    net.backward(tape, up, g);
    auto f = [&] { return (net.forward(x).array() * up.array()).sum(); };
    worst["mlp"] = std::max(worst["mlp"], worst_over(g.values(), net.values(), f));
  }

  for (int k = 0; k < kCases; ++k) {
    const soft_rl::Batch b = random_batch(rng, 4, 1.0);
    TwinCritic critic = TwinCritic::create(2, 2, 2, random_hidden(rng), k);
    randomise(critic.q1, rng, 0.6);
    randomise(critic.q2, rng, 0.6);
    const Vector y = random_vector(rng, 4, -3.0, 3.0);
    const auto lg = soft_rl::critic_loss_and_grad(critic, b, y);
    auto f = [&] { return soft_rl::critic_loss_and_grad(critic, b, y).loss; };
    worst["critic loss"] = std::max(
        {worst["critic loss"], worst_over(lg.q1_grad.values(), critic.q1.values(), f),
         worst_over(lg.q2_grad.values(), critic.q2.values(), f)});
  }

  for (int k = 0; k < kCases; ++k) {
    const double scale = rng.uniform(0.5, 2.0);
    const soft_rl::Batch b = random_batch(rng, 4, scale);
    auto policy = SquashedGaussianPolicy::create(2, 2, Vector::Constant(2, scale), random_hidden(rng), k);
    randomise(policy.net, rng, 0.6);
    const Matrix noise = rng.normal_matrix(2, 4);

    // Log-probability path alone: a null critic leaves only alpha * log pi.
    TwinCritic zero = TwinCritic::create(2, 2, 2, {4}, k);
    zero.q1.set_zero();
    zero.q2.set_zero();
    const auto lp = soft_rl::sac_actor_loss_and_grad(policy, zero, b, 1.0, noise);
    auto f_lp = [&] { return soft_rl::sac_actor_loss_and_grad(policy, zero, b, 1.0, noise).loss; };
    worst["squashed log-prob"] = std::max(worst["squashed log-prob"], worst_over(lp.grad.values(), policy.net.values(), f_lp));

    TwinCritic critic = TwinCritic::create(2, 2, 2, random_hidden(rng), k + 1000);
    randomise(critic.q1, rng, 0.6);
    randomise(critic.q2, rng, 0.6);
    LevelPolicy anchor = policy;
    randomise(std::get<SquashedGaussianPolicy>(anchor).net, rng, 0.6);
    const soft_rl::KlPenalty kl = k % 2 ? soft_rl::KlPenalty{&anchor, rng.uniform(0.1, 2.0)} : soft_rl::KlPenalty{};
    const double alpha = rng.uniform(0.01, 1.0);
    const auto sac = soft_rl::sac_actor_loss_and_grad(policy, critic, b, alpha, noise, kl);
    auto f_sac = [&] { return soft_rl::sac_actor_loss_and_grad(policy, critic, b, alpha, noise, kl).loss; };
    worst["SAC actor"] = std::max(worst["SAC actor"], worst_over(sac.grad.values(), policy.net.values(), f_sac));
  }

  for (int k = 0; k < kCases; ++k) {
    const double scale = rng.uniform(0.5, 2.0);
    const soft_rl::Batch b = random_batch(rng, 4, scale);
    auto policy = DeterministicPolicy::create(2, 2, Vector::Constant(2, scale), random_hidden(rng), 0.2, k);
    randomise(policy.net, rng, 0.6);
    TwinCritic critic = TwinCritic::create(2, 2, 2, random_hidden(rng), k + 2000);
    randomise(critic.q1, rng, 0.6);
    LevelPolicy anchor = policy;
    randomise(std::get<DeterministicPolicy>(anchor).net, rng, 0.6);
    const soft_rl::KlPenalty kl = k % 2 ? soft_rl::KlPenalty{&anchor, rng.uniform(0.1, 2.0)} : soft_rl::KlPenalty{};
    const auto td3 = soft_rl::td3_actor_loss_and_grad(policy, critic, b, kl);
    auto f = [&] { return soft_rl::td3_actor_loss_and_grad(policy, critic, b, kl).loss; };
    worst["TD3 actor"] = std::max(worst["TD3 actor"], worst_over(td3.grad.values(), policy.net.values(), f));
  }

  Outcome o{true, ""};
  for (const auto& [name, err] : worst) {
    o.pass = o.pass && err < 1e-4;
    o.detail += name + " " + fmt(err) + "; ";
  }
  o.detail = "max rel err over " + std::to_string(kCases) + " cases each: " + o.detail + "tol 1e-4";
  return o;
}

Outcome criterion2() {
  const auto p = shiro::testing::constant_gaussian(Vector{{0.4}}, Vector{{std::log(0.6)}}, Vector{{1.0}});
  const Vector z = Vector::Zero(1);
  const int n = 400000;
  const double h = 2.0 / n;
  double mass = 0.0, entropy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lp = p.log_prob(z, z, Vector{{-1.0 + (i + 0.5) * h}});
    mass += std::exp(lp) * h;
    entropy -= std::exp(lp) * lp * h;
  }
  Rng rng(202);
  double mc = 0.0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) mc -= p.sample(z, z, rng).log_prob;
  mc /= samples;
  const double rel = std::abs(mc - entropy) / std::abs(entropy);
  return {std::abs(mass - 1.0) <= 1e-3 && rel <= 0.01,
          "mass " + fmt(mass) + " (tol 1e-3); entropy quadrature " + fmt(entropy) + " vs MC " + fmt(mc) +
              ", rel " + fmt(rel) + " (tol 0.01)"};
}

Outcome criterion3() {
  Rng rng(303);
  double telescope = 0.0, attain = 0.0;
  bool rabs_exact = true;
  for (int k = 0; k < 10000; ++k) {
    Vector s = random_vector(rng, 2, -2.0, 18.0);
    const Vector s0 = s, g0 = random_vector(rng, 2, -10.0, 10.0);
    Vector g = g0;
    for (int t = 0; t < 10; ++t) {
      const Vector next = s + random_vector(rng, 2);
      attain = std::max(attain, std::abs(hrl::intrinsic_reward(s, g, s + g)));
      g = hrl::goal_transition(s, g, next);
      s = next;
      telescope = std::max(telescope, (g - (s0 + g0 - s)).cwiseAbs().maxCoeff());
    }
    std::vector<double> r(1 + rng.below(10));
    double sum = 0.0;
    for (double& x : r) sum += (x = -rng.uniform(0.0, 20.0));
    rabs_exact = rabs_exact && hrl::accumulate_abstracted_reward(r, 0.1) == 0.1 * sum;
  }

  const LevelPolicy low = DeterministicPolicy::create(2, 2, Vector::Ones(2), {16, 16}, 0.1, 7);
  const auto likelihood = hrl::likelihood_of(low);
  const hrl::RelabelParams params{Vector::Constant(2, 10.0), 0.5, 8};
  int beaten = 0;
  for (int k = 0; k < 1000; ++k) {
    hrl::HighLevelTransition hl;
    hl.states.push_back(random_vector(rng, 2, -2.0, 18.0));
    const int len = 1 + static_cast<int>(rng.below(10));
    for (int i = 0; i < len; ++i) {
      hl.actions.push_back(random_vector(rng, 2));
      hl.states.push_back(hl.states.back() + hl.actions.back());
      hl.env_rewards.push_back(-rng.uniform(0.0, 20.0));
    }
    hl.subgoal = random_vector(rng, 2, -10.0, 10.0);
    hl.episode_goal = random_vector(rng, 2, -2.0, 18.0);
    const auto result = hrl::relabel_subgoal(hl, likelihood, params, rng);
    const double chosen = hrl::score_candidate(hl, result.subgoal, likelihood);
    for (const Vector& c : result.candidates)
      if (hrl::score_candidate(hl, c, likelihood) > chosen) ++beaten;
  }
  return {telescope <= 1e-12 && attain == 0.0 && rabs_exact && beaten == 0,
          "telescoping max err " + fmt(telescope) + " over 1e4 trajectories (tol 1e-12); |r_int| at attainment " +
              fmt(attain) + "; R_abs exact " + (rabs_exact ? "yes" : "no") + "; relabel beaten " +
              std::to_string(beaten) + "/1000"};
}

Outcome criterion4() {
  const double fixed = diagnostics::kl_fixed_covariance(Vector::Zero(2), Vector{{1.0, 0.0}}, Vector::Ones(2));
  const Vector mu_p{{0.3, -1.0}}, sd_p{{0.7, 1.2}}, mu_q{{-0.2, 0.4}}, sd_q{{1.1, 0.9}};
  const double exact = diagnostics::kl_diag_gaussian(mu_p, sd_p, mu_q, sd_q);
  Rng rng(404);
  const int n = 1000000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < 2; ++i) {
      const double x = mu_p[i] + sd_p[i] * rng.normal();
      const double zp = (x - mu_p[i]) / sd_p[i], zq = (x - mu_q[i]) / sd_q[i];
      sum += -0.5 * zp * zp - std::log(sd_p[i]) + 0.5 * zq * zq + std::log(sd_q[i]);
    }
  }
  const double mc = sum / n;
  const double rel = std::abs(mc - exact) / exact;
  return {fixed == 0.5 && rel <= 0.02, "fixed-covariance " + fmt(fixed) + " (expect 0.5 exactly); diagonal " +
                                           fmt(exact) + " vs MC " + fmt(mc) + ", rel " + fmt(rel) + " (tol 0.02)"};
}

Outcome criterion5() {
  const env::PointEnv env(env::point_maze_layout());
  const Vector start{{2.0, 2.0}}, subgoal{{6.0, 1.0}};
  // Base policy: a noisy proportional step towards the sub-goal.
  const diagnostics::ActionSampler base = [](const Vector&, const Vector& g, Rng& rng) {
    Vector a = (0.3 * g).cwiseMax(-1.0).cwiseMin(1.0);
    for (int i = 0; i < 2; ++i) a[i] = std::clamp(a[i] + 0.1 * rng.normal(), -1.0, 1.0);
    return a;
  };
  diagnostics::Theorem1Config config;
  config.c = 10;
  config.rollouts = 10000;
  config.grid_cell = 0.5;
  config.delta = 0.01;

  int held = 0, trials = 0, vacuous = 0;
  double worst_margin = -1e300;
  for (double eps : {0.01, 0.05, 0.1}) {
    // Mixture: with probability eps the action is uniform over the box, so
    // the per-step total variation to the base policy is at most eps.
    const diagnostics::ActionSampler mixed = [&base, eps](const Vector& s, const Vector& g, Rng& rng) {
      if (rng.uniform() < eps) return Vector{{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}};
      return base(s, g, rng);
    };
    for (int trial = 0; trial < 20; ++trial, ++trials) {
      Rng rng(5000 + trial, static_cast<std::uint64_t>(eps * 1000));
      const auto r = diagnostics::theorem1_check(env, base, mixed, start, subgoal, eps, config, rng);
      held += r.holds ? 1 : 0;
      worst_margin = std::max(worst_margin, r.empirical_tv - r.bound - r.slack);
      if (eps >= 0.05 && !(r.empirical_tv > 0.0)) ++vacuous;
    }
  }
  return {held == trials && vacuous == 0, std::to_string(held) + "/" + std::to_string(trials) +
                                              " trials within 2*eps*c + slack (worst tv - bound - slack " +
                                              fmt(worst_margin) + "); zero-tv trials at eps >= 0.05: " +
                                              std::to_string(vacuous)};
}

Outcome criterion6() {
  Rng rng(606);
  int agree = 0;
  const int batches = 1000;
  for (int k = 0; k < batches; ++k) {
    const double target = -rng.uniform(0.5, 4.0);
    std::vector<double> lp(8 + rng.below(250));
    if (k % 50 == 0) {
      std::fill(lp.begin(), lp.end(), -target);
    } else {
      const double centre = rng.uniform(-6.0, 6.0);
      for (double& x : lp) x = centre + rng.normal();
    }
    double mean = 0.0;
    for (double x : lp) mean += x;
    mean /= static_cast<double>(lp.size());
    const double batch_entropy = -mean;
    soft_rl::Temperature t(rng.uniform(0.01, 2.0), target, true);
    const double before = t.log_alpha();
    t.update(lp);
    const double delta = t.log_alpha() - before;
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    if (sign(delta) == sign(target - batch_entropy)) ++agree;
  }
  return {agree == batches, std::to_string(agree) + "/" + std::to_string(batches) + " batches with matching sign"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome criterion7(const fs::path& work) {
  harness::RunConfig c;
  c.variant = harness::Variant::kShiroHl;
  c.total_env_steps = 20000;
  c.eval_interval = 2000;
  c.record_wall_time = false;
  c.seed = 7;
  const fs::path dir = work / "c7";
  fs::remove_all(dir);
  for (const char* sub : {"a", "b", "split"}) fs::create_directories(dir / sub);

  harness::Trainer a(c, dir / "a");
  a.run_until(c.total_env_steps);
  harness::Trainer b(c, dir / "b");
  b.run_until(c.total_env_steps);
  const bool same_seed = a.metrics() == b.metrics() && slurp(dir / "a" / "metrics.jsonl") == slurp(dir / "b" / "metrics.jsonl");

  {
    harness::Trainer first(c, dir / "split");
    first.run_until(c.total_env_steps / 2);
    harness::save_checkpoint(first, dir / "split" / "half.json");
  }
  harness::Trainer second = harness::load_checkpoint(dir / "split" / "half.json", dir / "split");
  second.run_until(c.total_env_steps);
  const bool resumed = second.metrics() == a.metrics() &&
                       slurp(dir / "split" / "metrics.jsonl") == slurp(dir / "a" / "metrics.jsonl") &&
                       slurp(dir / "split" / "kl.csv") == slurp(dir / "a" / "kl.csv") &&
                       second.to_json() == a.to_json();
  const bool pass = same_seed && resumed && a.metrics().size() == 10;
  if (pass) fs::remove_all(dir);
  return {pass, std::string("20k-step shiro-hl: same-seed metrics bit-identical ") + (same_seed ? "yes" : "no") +
                    ", split resume at 10k identical " + (resumed ? "yes" : "no") + ", " +
                    std::to_string(a.metrics().size()) + " metric records"};
}

// Training runs shared by criteria 8 and 9; completed runs are reused.
struct EfficiencyRun {
  harness::Variant variant;
  std::uint64_t seed;
  std::vector<harness::MetricsRecord> metrics;
  std::vector<diagnostics::KlRecord> kl;
};

constexpr std::int64_t kEfficiencyBudget = 300000;

harness::RunConfig efficiency_config(harness::Variant variant, std::uint64_t seed) {
  harness::RunConfig c;
  c.variant = variant;
  c.seed = seed;
  c.total_env_steps = kEfficiencyBudget;
  c.eval_interval = 5000;
  c.eval_episodes = 10;
  c.stop_at_success = 0.9;
  return c;
}

std::vector<diagnostics::KlRecord> read_kl_csv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<diagnostics::KlRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    diagnostics::KlRecord r;
    char comma;
    std::istringstream row(line);
    row >> r.env_step >> comma >> r.mean_kl >> comma >> r.max_kl >> comma >> r.pinsker_epsilon >> comma >>
        r.bound_2ec;
    if (!row) throw FormatError("bad kl.csv row: " + line);
    out.push_back(r);
  }
  return out;
}

std::vector<EfficiencyRun> efficiency_runs(const fs::path& work) {
  std::vector<EfficiencyRun> runs;
  for (harness::Variant v : {harness::Variant::kShiroHl, harness::Variant::kHiro}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const harness::RunConfig c = efficiency_config(v, seed);
      const fs::path dir = work / "c8" / (harness::to_string(v) + "_seed" + std::to_string(seed));
      const fs::path marker = dir / "complete.json";
      const bool cached = fs::exists(marker) && nlohmann::json::parse(slurp(marker)) == harness::to_json(c);
      if (!cached) {
        fs::remove_all(dir);
        fs::create_directories(dir);
        const auto t0 = std::chrono::steady_clock::now();
        harness::Trainer t(c, dir);
        while (!t.finished()) t.step();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "  %s seed %llu: %lld steps in %.0f s\n", harness::to_string(v).c_str(),
                     static_cast<unsigned long long>(seed), static_cast<long long>(t.env_step()), secs);
        std::ofstream(marker) << harness::to_json(c).dump(2);
      }
      runs.push_back({v, seed, harness::read_metrics_file(dir / "metrics.jsonl"), read_kl_csv(dir / "kl.csv")});
    }
  }
  return runs;
}

std::optional<std::int64_t> first_step_reaching(const std::vector<harness::MetricsRecord>& m, double level) {
  for (const auto& r : m)
    if (r.success_rate >= level) return r.step;
  return std::nullopt;
}

Outcome criterion8(const std::vector<EfficiencyRun>& runs) {
  std::map<harness::Variant, double> total;
  std::map<harness::Variant, bool> all_reach;
  std::string detail;
  for (const auto& run : runs) {
    const auto half = first_step_reaching(run.metrics, 0.5);
    const auto ninety = first_step_reaching(run.metrics, 0.9);
    all_reach.try_emplace(run.variant, true);
    all_reach[run.variant] = all_reach[run.variant] && ninety && *ninety <= kEfficiencyBudget;
    total[run.variant] += half ? static_cast<double>(*half) : std::numeric_limits<double>::infinity();
    detail += harness::to_string(run.variant) + "/" + std::to_string(run.seed) + " 50%@" +
              (half ? std::to_string(*half) : "never") + " 90%@" + (ninety ? std::to_string(*ninety) : "never") +
              "; ";
  }
  const double hl = total[harness::Variant::kShiroHl] / 3.0;
  const double hiro = total[harness::Variant::kHiro] / 3.0;
  const double ratio = hl / hiro;
  const bool pass = all_reach[harness::Variant::kShiroHl] && all_reach[harness::Variant::kHiro] &&
                    std::isfinite(ratio) && ratio <= 0.75;
  return {pass, "mean steps to 50%: shiro-hl " + fmt(hl) + ", hiro " + fmt(hiro) + ", ratio " + fmt(ratio) +
                    " (need <= 0.75, both >= 90% within 300k); " + detail};
}

Outcome criterion9(const std::vector<EfficiencyRun>& runs) {
  std::map<harness::Variant, std::pair<int, int>> counts;
  for (const auto& run : runs) {
    if (run.variant == harness::Variant::kHiro) continue;
    for (const auto& r : run.kl) {
      ++counts[run.variant].second;
      if (r.mean_kl < 1.0) ++counts[run.variant].first;
    }
  }
  bool pass = !counts.empty();
  std::string detail;
  for (const auto& [v, c] : counts) {
    const double frac = c.second ? static_cast<double>(c.first) / c.second : 0.0;
    pass = pass && c.second > 0 && frac >= 0.95;
    detail += harness::to_string(v) + " " + std::to_string(c.first) + "/" + std::to_string(c.second) +
              " checkpoints with mean KL < 1.0 (" + fmt(100.0 * frac) + "%, need >= 95%)";
  }
  return {pass, detail};
}

Outcome criterion10(const fs::path& work) {
  int ok = 0, total = 0;
  std::string failures;
  for (harness::Variant v : {harness::Variant::kHiro, harness::Variant::kShiroHl, harness::Variant::kShiroLl,
                             harness::Variant::kShiroBl, harness::Variant::kFlatSac}) {
    for (harness::TemperatureMode m : {harness::TemperatureMode::kConst, harness::TemperatureMode::kLearned}) {
      ++total;
      const std::string name = harness::to_string(v) + "-" + harness::to_string(m);
      const fs::path dir = work / "c10" / name;
      fs::remove_all(dir);
      fs::create_directories(dir);
      harness::RunConfig c;
      c.variant = v;
      c.temperature_mode_high = c.temperature_mode_low = m;
      c.total_env_steps = 10000;
      c.eval_interval = 2000;
      try {
        harness::Trainer t(c, dir);
        t.run();
        const auto records = harness::read_metrics_file(dir / "metrics.jsonl");
        bool finite = records.size() == 5;
        for (const auto& r : records) {
          const auto j = harness::to_json(r);
          for (const auto& [key, value] : j.items()) finite = finite && std::isfinite(value.get<double>());
        }
        if (finite) {
          ++ok;
          fs::remove_all(dir);
        } else {
          failures += name + " (metrics) ";
        }
      } catch (const std::exception& e) {
        failures += name + " (" + e.what() + ") ";
      }
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                           " variant x temperature runs completed 10k steps with schema-valid metrics" +
                           (failures.empty() ? "" : "; failed: " + failures)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  std::string work = "acceptance_runs";
  app.add_option("-c,--criterion", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--work-dir", work, "Directory for training runs");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int i = 1; i <= 10; ++i) selected.push_back(i);
  const std::set<int> wanted(selected.begin(), selected.end());
  fs::create_directories(work);

  std::optional<std::vector<EfficiencyRun>> runs;
  auto efficiency = [&]() -> const std::vector<EfficiencyRun>& {
    if (!runs) runs = efficiency_runs(work);
    return *runs;
  };
  const std::map<int, std::function<Outcome()>> checks = {
      {1, criterion1},
      {2, criterion2},
      {3, criterion3},
      {4, criterion4},
      {5, criterion5},
      {6, criterion6},
      {7, [&] { return criterion7(work); }},
      {8, [&] { return criterion8(efficiency()); }},
      {9, [&] { return criterion9(efficiency()); }},
      {10, [&] { return criterion10(work); }},
  };

  bool all = true;
  for (int id : wanted) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks.at(id)();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s  %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
