#include "shiro/hrl/relabel.hpp"

#include <algorithm>
#include <cmath>

#include "shiro/core/error.hpp"
#include "shiro/hrl/goal_model.hpp"

namespace shiro::hrl {
namespace {

Vector clip_to_box(Vector g, const Vector& high) {
  return g.cwiseMax(-high).cwiseMin(high);
}

// Appends the rolled goal sequence of one candidate to (states, goals, actions)
// starting at column `col`.
void fill_rollout(const HighLevelTransition& hl, const Vector& candidate, Matrix& states, Matrix& goals,
                  Matrix& actions, Eigen::Index col) {
  Vector g = candidate;
  for (int i = 0; i < hl.length(); ++i) {
    states.col(col + i) = hl.states[i];
    goals.col(col + i) = g;
    actions.col(col + i) = hl.actions[i];
    g = goal_transition(hl.states[i], g, hl.states[i + 1]);
  }
}

void check_sequences(const HighLevelTransition& hl) {
  if (hl.states.size() != hl.actions.size() + 1 || hl.actions.empty())
    throw ContractViolation("relabel: transition must hold k actions and k + 1 states (k >= 1)");
}

}  // namespace

ActionLikelihood likelihood_of(const policies::LevelPolicy& low_policy) {
  return [&low_policy](const Matrix& states, const Matrix& goals, const Matrix& actions) -> Vector {
    if (const auto* det = std::get_if<policies::DeterministicPolicy>(&low_policy)) {
      return -(actions - det->action(states, goals)).colwise().squaredNorm().transpose();
    }
    const auto& sq = std::get<policies::SquashedGaussianPolicy>(low_policy);
    const auto [mean, log_std] = sq.head(states, goals);
    Vector out(actions.cols());
    Vector u(sq.action_dim());
    for (Eigen::Index j = 0; j < actions.cols(); ++j) {
      for (int i = 0; i < sq.action_dim(); ++i) {
        const double t = actions(i, j) / sq.action_scale[i];
        if (!(std::abs(t) < 1.0)) throw DomainError("relabel: stored action outside the open action box");
        u[i] = std::atanh(t);
      }
      out[j] = sq.log_prob_pre_squash({mean.col(j), log_std.col(j)}, u);
    }
    return out;
  };
}

std::vector<Vector> relabel_candidates(const HighLevelTransition& hl, const RelabelParams& params, Rng& rng) {
  check_sequences(hl);
  require(params.subgoal_high.size() == hl.subgoal.size(), "relabel: sub-goal box dimension mismatch");
  const Vector diff = hl.final_state().head(hl.subgoal.size()) - hl.first_state().head(hl.subgoal.size());
  std::vector<Vector> candidates;
  candidates.reserve(2 + params.num_samples);
  candidates.push_back(clip_to_box(hl.subgoal, params.subgoal_high));
  candidates.push_back(clip_to_box(diff, params.subgoal_high));
  const Vector sigma = params.sigma_fraction * params.subgoal_high;
  for (int n = 0; n < params.num_samples; ++n) {
    Vector c = diff;
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] += sigma[i] * rng.normal();
    candidates.push_back(clip_to_box(std::move(c), params.subgoal_high));
  }
  return candidates;
}

double score_candidate(const HighLevelTransition& hl, const Vector& candidate,
                       const ActionLikelihood& likelihood) {
  check_sequences(hl);
  const auto k = hl.length();
  Matrix states(hl.states.front().size(), k), goals(candidate.size(), k), actions(hl.actions.front().size(), k);
  fill_rollout(hl, candidate, states, goals, actions, 0);
  return likelihood(states, goals, actions).sum();
}

RelabelResult relabel_subgoal(const HighLevelTransition& hl, const ActionLikelihood& likelihood,
                              const RelabelParams& params, Rng& rng) {
  RelabelResult result;
  result.candidates = relabel_candidates(hl, params, rng);
  for (const Vector& c : result.candidates) result.scores.push_back(score_candidate(hl, c, likelihood));
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    if (result.scores[i] > result.scores[result.index]) result.index = static_cast<int>(i);
  }
  result.subgoal = result.candidates[result.index];
  return result;
}

std::vector<Vector> relabel_batch(const std::vector<const HighLevelTransition*>& batch,
                                  const ActionLikelihood& likelihood, const RelabelParams& params, Rng& rng) {
  if (batch.empty()) return {};
  std::vector<std::vector<Vector>> candidates;
  candidates.reserve(batch.size());
  Eigen::Index columns = 0;
  for (const auto* hl : batch) {
    candidates.push_back(relabel_candidates(*hl, params, rng));
    columns += static_cast<Eigen::Index>(candidates.back().size()) * hl->length();
  }
  const auto& first = *batch.front();
  Matrix states(first.states.front().size(), columns);
  Matrix goals(first.subgoal.size(), columns);
  Matrix actions(first.actions.front().size(), columns);
  Eigen::Index col = 0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    for (const Vector& c : candidates[b]) {
      fill_rollout(*batch[b], c, states, goals, actions, col);
      col += batch[b]->length();
    }
  }
  const Vector per_column = likelihood(states, goals, actions);

  std::vector<Vector> chosen;
  chosen.reserve(batch.size());
  col = 0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto k = batch[b]->length();
    double best_score = 0.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < candidates[b].size(); ++i) {
      const double score = per_column.segment(col, k).sum();
      col += k;
      if (i == 0 || score > best_score) {
        best_score = score;
        best = i;
      }
    }
    chosen.push_back(candidates[b][best]);
  }
  return chosen;
}

}  // namespace shiro::hrl
