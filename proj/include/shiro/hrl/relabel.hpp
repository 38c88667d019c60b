#pragma once

#include <functional>
#include <vector>

#include "shiro/core/rng.hpp"
#include "shiro/hrl/transitions.hpp"
#include "shiro/policies/level_policy.hpp"

namespace shiro::hrl {

// Per-column log-likelihood of actions given (state, goal) columns.
using ActionLikelihood =
    std::function<Vector(const Matrix& states, const Matrix& goals, const Matrix& actions)>;

// Squashed policies: log pi(a | s, g). Deterministic policies:
// -||a - mu(s, g)||^2, the Gaussian log-likelihood up to constants.
ActionLikelihood likelihood_of(const policies::LevelPolicy& low_policy);

struct RelabelParams {
  Vector subgoal_high;          // sub-goal box is [-subgoal_high, subgoal_high]
  double sigma_fraction = 0.5;  // candidate noise = sigma_fraction * subgoal_high
  int num_samples = 8;
};

struct RelabelResult {
  Vector subgoal;
  int index = 0;
  std::vector<Vector> candidates;
  std::vector<double> scores;
};

// [stored g_t, s_{t+k} - s_t, num_samples draws around s_{t+k} - s_t], all
// clipped to the sub-goal box.
std::vector<Vector> relabel_candidates(const HighLevelTransition& hl, const RelabelParams& params, Rng& rng);

// Rolls `candidate` along the stored states with the goal transition model
// and sums the low-level log-likelihood of the stored actions.
double score_candidate(const HighLevelTransition& hl, const Vector& candidate,
                       const ActionLikelihood& likelihood);

// Argmax of score_candidate over relabel_candidates; ties go to the lowest
// index, so the stored sub-goal wins any tie it is part of.
RelabelResult relabel_subgoal(const HighLevelTransition& hl, const ActionLikelihood& likelihood,
                              const RelabelParams& params, Rng& rng);

// Relabels a whole mini-batch with one stacked likelihood evaluation.
std::vector<Vector> relabel_batch(const std::vector<const HighLevelTransition*>& batch,
                                  const ActionLikelihood& likelihood, const RelabelParams& params, Rng& rng);

}  // namespace shiro::hrl
