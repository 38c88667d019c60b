#pragma once

#include <vector>

#include "shiro/core/rng.hpp"
#include "shiro/nn/adam.hpp"
#include "shiro/policies/level_policy.hpp"
#include "shiro/policies/twin_critic.hpp"

namespace shiro::soft_rl {

// Mini-batch of goal-conditioned transitions, one sample per column.
struct Batch {
  Matrix states;
  Matrix goals;
  Matrix actions;
  Vector rewards;
  Matrix next_states;
  Matrix next_goals;
  Vector dones;

  Eigen::Index size() const { return states.cols(); }
};

// Target-policy smoothing for deterministic policies, as fractions of the
// action scale.
struct TargetSmoothing {
  double noise = 0.2;
  double noise_clip = 0.5;
};

// y = r + gamma * (1 - done) * (min_q'(s', g', a') - alpha * log pi(a' | s', g')).
// Squashed policies draw a' from `policy` (alpha term present); deterministic
// policies use the smoothed target action of `target_policy` (no alpha term).
// `noise` holds the standard-normal draws (action_dim x batch).
Vector compute_critic_target(const Batch& batch, const policies::TwinCritic& target_critic,
                             const policies::LevelPolicy& policy, const policies::LevelPolicy& target_policy,
                             double alpha, double gamma, const TargetSmoothing& smoothing, const Matrix& noise);
Vector compute_critic_target(const Batch& batch, const policies::TwinCritic& target_critic,
                             const policies::LevelPolicy& policy, const policies::LevelPolicy& target_policy,
                             double alpha, double gamma, const TargetSmoothing& smoothing, Rng& rng);

struct CriticLossGrad {
  double loss = 0.0;  // MSE(q1, y) + MSE(q2, y)
  nn::Gradients q1_grad;
  nn::Gradients q2_grad;
};

CriticLossGrad critic_loss_and_grad(const policies::TwinCritic& critic, const Batch& batch, const Vector& targets);
// One Adam step per head; returns the loss before the step.
double update_critics(policies::TwinCritic& critic, nn::AdamState& q1_opt, nn::AdamState& q2_opt,
                      const Batch& batch, const Vector& targets);

// Optional soft trust-region term alpha_kl * E_s[KL(pi_new || anchor)].
struct KlPenalty {
  const policies::LevelPolicy* anchor = nullptr;
  double coefficient = 0.0;
  bool active() const { return anchor != nullptr && coefficient > 0.0; }
};

struct ActorLossGrad {
  double loss = 0.0;
  nn::Gradients grad;
  Vector log_probs;  // squashed policies only
};

// E[alpha * log pi(a|s,g) - min_q(s,g,a)], a reparameterised with `noise`.
ActorLossGrad sac_actor_loss_and_grad(const policies::SquashedGaussianPolicy& policy,
                                      const policies::TwinCritic& critic, const Batch& batch, double alpha,
                                      const Matrix& noise, const KlPenalty& kl = {});
// -E[q1(s, g, mu(s, g))].
ActorLossGrad td3_actor_loss_and_grad(const policies::DeterministicPolicy& policy,
                                      const policies::TwinCritic& critic, const Batch& batch,
                                      const KlPenalty& kl = {});

struct ActorUpdate {
  double loss = 0.0;
  Vector log_probs;
};

// Throw ContractViolation when the policy has the wrong kind.
ActorUpdate update_actor_sac(policies::LevelPolicy& policy, nn::AdamState& opt, const policies::TwinCritic& critic,
                             const Batch& batch, double alpha, Rng& rng, const KlPenalty& kl = {});
ActorUpdate update_actor_td3(policies::LevelPolicy& policy, nn::AdamState& opt, const policies::TwinCritic& critic,
                             const Batch& batch, const KlPenalty& kl = {});

// Per-state KL(p_new || p_old): closed-form diagonal Gaussian between
// pre-squash heads, or ||mu_new - mu_old||^2 / (2 sigma^2) summed over
// dimensions for deterministic policies with exploration noise sigma.
Vector per_state_kl(const policies::LevelPolicy& p_new, const policies::LevelPolicy& p_old, const Matrix& states,
                    const Matrix& goals);

// L' = L + alpha_kl * E_s[KL(policy_after || policy_before)].
double kl_penalized_actor_loss(double base_loss, const policies::LevelPolicy& policy_before,
                               const policies::LevelPolicy& policy_after, const Matrix& states,
                               const Matrix& goals, double alpha_kl);

}  // namespace shiro::soft_rl
