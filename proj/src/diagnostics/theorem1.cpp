#include "shiro/diagnostics/theorem1.hpp"

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "shiro/core/error.hpp"
#include "shiro/diagnostics/kl.hpp"
#include "shiro/hrl/goal_model.hpp"

namespace shiro::diagnostics {
namespace {

using Cell = std::pair<long long, long long>;
using Histogram = std::map<Cell, std::size_t>;

struct RolloutSet {
  Histogram histogram;
  std::vector<Vector> visited_states;
  std::vector<Vector> visited_goals;
};

RolloutSet roll(const env::Environment& env, const ActionSampler& sampler, const Vector& start_state,
                const Vector& subgoal, const Theorem1Config& config, Rng& rng, bool keep_visited) {
  RolloutSet out;
  auto sim = env.clone();
  for (std::size_t n = 0; n < config.rollouts; ++n) {
    sim->set_state(start_state, sim->goal(), 0);
    Vector s = start_state;
    Vector g = subgoal;
    for (int t = 0; t < config.c; ++t) {
      if (keep_visited) {
        out.visited_states.push_back(s);
        out.visited_goals.push_back(g);
      }
      const Vector a = sampler(s, g, rng);
      const Vector next = sim->step(a).next_state;
      g = hrl::goal_transition(s, g, next);
      s = next;
    }
    const Cell cell{static_cast<long long>(std::floor(s[0] / config.grid_cell)),
                    static_cast<long long>(std::floor(s[1] / config.grid_cell))};
    ++out.histogram[cell];
  }
  return out;
}

double total_variation(const Histogram& p, const Histogram& q, std::size_t n) {
  double sum = 0.0;
  for (const auto& [cell, count] : p) {
    const auto it = q.find(cell);
    const double other = it == q.end() ? 0.0 : static_cast<double>(it->second);
    sum += std::abs(static_cast<double>(count) - other);
  }
  for (const auto& [cell, count] : q) {
    if (!p.contains(cell)) sum += static_cast<double>(count);
  }
  return 0.5 * sum / static_cast<double>(n);
}

Theorem1Result finish(double tv, double epsilon, const Theorem1Config& config) {
  Theorem1Result r;
  r.empirical_tv = tv;
  r.epsilon = epsilon;
  r.bound = 2.0 * epsilon * config.c;
  r.slack = tv_slack(config.rollouts, config.delta);
  r.holds = tv <= r.bound + r.slack;
  r.rollouts = config.rollouts;
  return r;
}

void check_config(const Theorem1Config& config) {
  if (config.rollouts == 0) throw ContractViolation("theorem1_check: zero rollouts");
  require(config.c > 0, "theorem1_check: c must be positive");
  require(config.grid_cell > 0.0, "theorem1_check: grid cell must be positive");
  require(config.delta > 0.0 && config.delta < 1.0, "theorem1_check: delta must lie in (0, 1)");
}

}  // namespace

ActionSampler sampler_of(const policies::LevelPolicy& policy) {
  return [&policy](const Vector& s, const Vector& g, Rng& rng) {
    return policies::exploratory_action(policy, s, g, rng);
  };
}

double tv_slack(std::size_t rollouts, double delta) {
  return 3.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(rollouts)));
}

Theorem1Result theorem1_check(const env::Environment& env, const ActionSampler& old_policy,
                              const ActionSampler& new_policy, const Vector& start_state, const Vector& subgoal,
                              double epsilon, const Theorem1Config& config, Rng& rng) {
  check_config(config);
  require(epsilon >= 0.0, "theorem1_check: epsilon must be non-negative");
  const RolloutSet before = roll(env, old_policy, start_state, subgoal, config, rng, false);
  const RolloutSet after = roll(env, new_policy, start_state, subgoal, config, rng, false);
  return finish(total_variation(before.histogram, after.histogram, config.rollouts), epsilon, config);
}

Theorem1Result theorem1_check(const env::Environment& env, const policies::LevelPolicy& old_policy,
                              const policies::LevelPolicy& new_policy, const Vector& start_state,
                              const Vector& subgoal, const Theorem1Config& config, Rng& rng) {
  check_config(config);
  const RolloutSet before = roll(env, sampler_of(old_policy), start_state, subgoal, config, rng, true);
  const RolloutSet after = roll(env, sampler_of(new_policy), start_state, subgoal, config, rng, true);

  const auto visited = before.visited_states.size() + after.visited_states.size();
  Matrix states(start_state.size(), static_cast<Eigen::Index>(visited));
  Matrix goals(subgoal.size(), static_cast<Eigen::Index>(visited));
  Eigen::Index col = 0;
  for (const RolloutSet* set : {&before, &after}) {
    for (std::size_t i = 0; i < set->visited_states.size(); ++i, ++col) {
      states.col(col) = set->visited_states[i];
      goals.col(col) = set->visited_goals[i];
    }
  }
  const KlStats kl = policy_kl_gaussian(old_policy, new_policy, states, goals);
  Theorem1Result r =
      finish(total_variation(before.histogram, after.histogram, config.rollouts), pinsker_epsilon(kl.max_kl), config);
  r.caveat =
      "epsilon is the maximum over visited states, a lower estimate of the supremum over all states; "
      "the check is statistical, not a proof";
  return r;
}

}  // namespace shiro::diagnostics
