#include "shiro/soft_rl/updates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shiro/core/error.hpp"

namespace shiro::soft_rl {
namespace {

using policies::DeterministicPolicy;
using policies::kLogStdMax;
using policies::kLogStdMin;
using policies::LevelPolicy;
using policies::SquashedGaussianPolicy;
using policies::TwinCritic;

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void check_batch(const Batch& b) {
  const auto n = b.states.cols();
  require(b.goals.cols() == n && b.actions.cols() == n && b.rewards.size() == n && b.next_states.cols() == n &&
              b.next_goals.cols() == n && b.dones.size() == n,
          "batch columns are inconsistent");
}

// log pi of a = scale * tanh(u) for each column.
Vector squashed_log_probs(const Matrix& mean, const Matrix& log_std, const Matrix& u, const Vector& scale) {
  Vector out(u.cols());
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    double lp = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double z = (u(i, j) - mean(i, j)) * std::exp(-log_std(i, j));
      lp += -0.5 * z * z - log_std(i, j) - kHalfLog2Pi;
      lp -= std::log(scale[i]) + policies::log_one_minus_tanh_sq(u(i, j));
    }
    out[j] = lp;
  }
  return out;
}

// d min(q1, q2) / d action for each column, choosing q1 on ties.
Matrix min_q_action_gradient(const TwinCritic& critic, const Matrix& x, int action_dim, Vector& min_q) {
  nn::Mlp::Tape t1, t2;
  const Matrix q1 = critic.q1.forward(x, t1);
  const Matrix q2 = critic.q2.forward(x, t2);
  const auto n = x.cols();
  Matrix up1 = Matrix::Zero(1, n), up2 = Matrix::Zero(1, n);
  min_q.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (q1(0, j) <= q2(0, j)) {
      up1(0, j) = 1.0;
      min_q[j] = q1(0, j);
    } else {
      up2(0, j) = 1.0;
      min_q[j] = q2(0, j);
    }
  }
  const Matrix dx = critic.q1.input_gradient(t1, up1) + critic.q2.input_gradient(t2, up2);
  return dx.bottomRows(action_dim);
}

}  // namespace

Vector compute_critic_target(const Batch& batch, const TwinCritic& target_critic, const LevelPolicy& policy,
                             const LevelPolicy& target_policy, double alpha, double gamma,
                             const TargetSmoothing& smoothing, const Matrix& noise) {
  check_batch(batch);
  const int k = policies::action_dim(policy);
  require(noise.rows() == k && noise.cols() == batch.size(), "compute_critic_target: noise shape mismatch");
  Vector soft_value;
  if (const auto* sq = std::get_if<SquashedGaussianPolicy>(&policy)) {
    const auto [mean, log_std] = sq->head(batch.next_states, batch.next_goals);
    const Matrix u = mean + Matrix(log_std.array().exp() * noise.array());
    const Matrix a = sq->action_scale.asDiagonal() * Matrix(u.array().tanh());
    const Vector log_probs = squashed_log_probs(mean, log_std, u, sq->action_scale);
    soft_value = target_critic.min_q(batch.next_states, batch.next_goals, a) - alpha * log_probs;
  } else {
    const auto& det = std::get<DeterministicPolicy>(target_policy);
    Matrix a = det.action(batch.next_states, batch.next_goals);
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (int i = 0; i < k; ++i) {
        const double limit = smoothing.noise_clip * det.action_scale[i];
        const double eps = std::clamp(smoothing.noise * det.action_scale[i] * noise(i, j), -limit, limit);
        a(i, j) = std::clamp(a(i, j) + eps, -det.action_scale[i], det.action_scale[i]);
      }
    }
    soft_value = target_critic.min_q(batch.next_states, batch.next_goals, a);
  }
  return batch.rewards + gamma * (Vector::Ones(batch.size()) - batch.dones).cwiseProduct(soft_value);
}

Vector compute_critic_target(const Batch& batch, const TwinCritic& target_critic, const LevelPolicy& policy,
                             const LevelPolicy& target_policy, double alpha, double gamma,
                             const TargetSmoothing& smoothing, Rng& rng) {
  const Matrix noise = rng.normal_matrix(policies::action_dim(policy), batch.size());
  return compute_critic_target(batch, target_critic, policy, target_policy, alpha, gamma, smoothing, noise);
}

CriticLossGrad critic_loss_and_grad(const TwinCritic& critic, const Batch& batch, const Vector& targets) {
  check_batch(batch);
  require(targets.size() == batch.size(), "critic targets do not match the batch");
  const Matrix x = vstack(batch.states, batch.goals, batch.actions);
  const double n = static_cast<double>(batch.size());
  CriticLossGrad out{0.0, critic.q1.make_gradients(), critic.q2.make_gradients()};
  auto head = [&](const nn::Mlp& q, nn::Gradients& grad) {
    nn::Mlp::Tape tape;
    const Matrix pred = q.forward(x, tape);
    const Matrix err = pred - targets.transpose();
    out.loss += err.squaredNorm() / n;
    q.backward(tape, 2.0 * err / n, grad);
  };
  head(critic.q1, out.q1_grad);
  head(critic.q2, out.q2_grad);
  return out;
}

double update_critics(TwinCritic& critic, nn::AdamState& q1_opt, nn::AdamState& q2_opt, const Batch& batch,
                      const Vector& targets) {
  const CriticLossGrad lg = critic_loss_and_grad(critic, batch, targets);
  nn::adam_step(critic.q1, lg.q1_grad, q1_opt);
  nn::adam_step(critic.q2, lg.q2_grad, q2_opt);
  return lg.loss;
}

ActorLossGrad sac_actor_loss_and_grad(const SquashedGaussianPolicy& policy, const TwinCritic& critic,
                                      const Batch& batch, double alpha, const Matrix& noise, const KlPenalty& kl) {
  check_batch(batch);
  const int k = policy.action_dim();
  const auto n = batch.size();
  require(noise.rows() == k && noise.cols() == n, "sac actor: noise shape mismatch");
  const double inv_n = 1.0 / static_cast<double>(n);

  nn::Mlp::Tape tape;
  const Matrix out = policy.net.forward(vstack(batch.states, batch.goals), tape);
  const Matrix mean = out.topRows(k);
  const Matrix raw_log_std = out.bottomRows(k);
  const Matrix log_std = raw_log_std.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  const Matrix std_noise = log_std.array().exp() * noise.array();
  const Matrix u = mean + std_noise;
  const Matrix t = u.array().tanh();
  const Matrix a = policy.action_scale.asDiagonal() * t;

  ActorLossGrad result{0.0, policy.net.make_gradients(), squashed_log_probs(mean, log_std, u, policy.action_scale)};
  Vector min_q;
  const Matrix dq_da = min_q_action_gradient(critic, vstack(batch.states, batch.goals, a), k, min_q);
  result.loss = (alpha * result.log_probs - min_q).mean();

  // d loss / d u: alpha * dlogp/du - dQ/da * da/du, with dlogp/du = 2 tanh(u).
  Matrix d_u(k, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i)
      d_u(i, j) = inv_n * (alpha * 2.0 * t(i, j) -
                           dq_da(i, j) * policy.action_scale[i] * (1.0 - t(i, j) * t(i, j)));

  Matrix d_mean = d_u;
  Matrix d_log_std = d_u.cwiseProduct(std_noise).array() - alpha * inv_n;

  if (kl.active()) {
    const auto* anchor = std::get_if<SquashedGaussianPolicy>(kl.anchor);
    require(anchor != nullptr, "sac actor: KL anchor must be a squashed policy");
    const auto [mean0, log_std0] = anchor->head(batch.states, batch.goals);
    double penalty = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int i = 0; i < k; ++i) {
        const double var0 = std::exp(2.0 * log_std0(i, j));
        const double var = std::exp(2.0 * log_std(i, j));
        const double dm = mean(i, j) - mean0(i, j);
        penalty += log_std0(i, j) - log_std(i, j) + (var + dm * dm) / (2.0 * var0) - 0.5;
        d_mean(i, j) += kl.coefficient * inv_n * dm / var0;
        d_log_std(i, j) += kl.coefficient * inv_n * (var / var0 - 1.0);
      }
    }
    result.loss += kl.coefficient * penalty * inv_n;
  }

  // The clamp passes no gradient outside [kLogStdMin, kLogStdMax].
  for (Eigen::Index j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i)
      if (raw_log_std(i, j) < kLogStdMin || raw_log_std(i, j) > kLogStdMax) d_log_std(i, j) = 0.0;

  policy.net.backward(tape, vstack(d_mean, d_log_std), result.grad);
  return result;
}

ActorLossGrad td3_actor_loss_and_grad(const DeterministicPolicy& policy, const TwinCritic& critic,
                                      const Batch& batch, const KlPenalty& kl) {
  check_batch(batch);
  const int k = policy.action_dim();
  const auto n = batch.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  nn::Mlp::Tape tape;
  const Matrix squashed = policy.net.forward(vstack(batch.states, batch.goals), tape);
  const Matrix a = policy.action_scale.asDiagonal() * squashed;

  nn::Mlp::Tape q_tape;
  const Matrix q1 = critic.q1.forward(vstack(batch.states, batch.goals, a), q_tape);
  const Matrix dq_da = critic.q1.input_gradient(q_tape, Matrix::Ones(1, n)).bottomRows(k);

  ActorLossGrad result{-q1.mean(), policy.net.make_gradients(), {}};
  Matrix d_a = -inv_n * dq_da;

  if (kl.active()) {
    const auto* anchor = std::get_if<DeterministicPolicy>(kl.anchor);
    require(anchor != nullptr, "td3 actor: KL anchor must be a deterministic policy");
    const Matrix a0 = anchor->action(batch.states, batch.goals);
    double penalty = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int i = 0; i < k; ++i) {
        const double var = anchor->exploration_sigma[i] * anchor->exploration_sigma[i];
        const double dm = a(i, j) - a0(i, j);
        penalty += dm * dm / (2.0 * var);
        d_a(i, j) += kl.coefficient * inv_n * dm / var;
      }
    }
    result.loss += kl.coefficient * penalty * inv_n;
  }

  const Matrix d_squashed = policy.action_scale.asDiagonal() * d_a;
  policy.net.backward(tape, d_squashed, result.grad);
  return result;
}

ActorUpdate update_actor_sac(LevelPolicy& policy, nn::AdamState& opt, const TwinCritic& critic, const Batch& batch,
                             double alpha, Rng& rng, const KlPenalty& kl) {
  auto* sq = std::get_if<SquashedGaussianPolicy>(&policy);
  if (sq == nullptr) throw ContractViolation("update_actor_sac requires a squashed-Gaussian policy");
  const Matrix noise = rng.normal_matrix(sq->action_dim(), batch.size());
  ActorLossGrad lg = sac_actor_loss_and_grad(*sq, critic, batch, alpha, noise, kl);
  nn::adam_step(sq->net, lg.grad, opt);
  return {lg.loss, std::move(lg.log_probs)};
}

ActorUpdate update_actor_td3(LevelPolicy& policy, nn::AdamState& opt, const TwinCritic& critic, const Batch& batch,
                             const KlPenalty& kl) {
  auto* det = std::get_if<DeterministicPolicy>(&policy);
  if (det == nullptr) throw ContractViolation("update_actor_td3 requires a deterministic policy");
  ActorLossGrad lg = td3_actor_loss_and_grad(*det, critic, batch, kl);
  nn::adam_step(det->net, lg.grad, opt);
  return {lg.loss, {}};
}

Vector per_state_kl(const LevelPolicy& p_new, const LevelPolicy& p_old, const Matrix& states, const Matrix& goals) {
  require(policies::kind_of(p_new) == policies::kind_of(p_old), "per_state_kl: policy kinds differ");
  require(policies::action_dim(p_new) == policies::action_dim(p_old), "per_state_kl: action dims differ");
  const auto n = states.cols();
  Vector out = Vector::Zero(n);
  if (const auto* det_new = std::get_if<DeterministicPolicy>(&p_new)) {
    const auto& det_old = std::get<DeterministicPolicy>(p_old);
    const Matrix diff = det_new->action(states, goals) - det_old.action(states, goals);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < diff.rows(); ++i)
        out[j] += diff(i, j) * diff(i, j) / (2.0 * det_old.exploration_sigma[i] * det_old.exploration_sigma[i]);
    return out;
  }
  const auto [m1, s1] = std::get<SquashedGaussianPolicy>(p_new).head(states, goals);
  const auto [m0, s0] = std::get<SquashedGaussianPolicy>(p_old).head(states, goals);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m1.rows(); ++i) {
      const double var0 = std::exp(2.0 * s0(i, j));
      const double var1 = std::exp(2.0 * s1(i, j));
      const double dm = m1(i, j) - m0(i, j);
      out[j] += s0(i, j) - s1(i, j) + (var1 + dm * dm) / (2.0 * var0) - 0.5;
    }
  }
  return out;
}

double kl_penalized_actor_loss(double base_loss, const LevelPolicy& policy_before, const LevelPolicy& policy_after,
                               const Matrix& states, const Matrix& goals, double alpha_kl) {
  if (alpha_kl < 0.0) throw ContractViolation("kl_penalized_actor_loss: alpha_kl must be non-negative");
  if (alpha_kl == 0.0) return base_loss;
  return base_loss + alpha_kl * per_state_kl(policy_after, policy_before, states, goals).mean();
}

}  // namespace shiro::soft_rl
