#include <doctest.h>

#include <cmath>

#include "shiro/core/error.hpp"
#include "shiro/diagnostics/kl.hpp"
#include "shiro/soft_rl/level_agent.hpp"
#include "shiro/soft_rl/temperature.hpp"
#include "shiro/soft_rl/updates.hpp"
#include "support.hpp"

using namespace shiro;
using namespace shiro::soft_rl;
using policies::DeterministicPolicy;
using policies::LevelPolicy;
using policies::SquashedGaussianPolicy;
using policies::TwinCritic;
using shiro::testing::central_difference;
using shiro::testing::gradient_error;
using shiro::testing::random_matrix;

namespace {

Batch random_batch(Rng& rng, int n, int s_dim = 2, int g_dim = 2, int a_dim = 2, double a_scale = 1.0) {
  Batch b;
  b.states = random_matrix(rng, s_dim, n, -2.0, 2.0);
  b.goals = random_matrix(rng, g_dim, n, -2.0, 2.0);
  b.actions = random_matrix(rng, a_dim, n, -a_scale * 0.99, a_scale * 0.99);
  b.rewards = random_matrix(rng, n, 1, -5.0, 0.0).col(0);
  b.next_states = random_matrix(rng, s_dim, n, -2.0, 2.0);
  b.next_goals = random_matrix(rng, g_dim, n, -2.0, 2.0);
  b.dones = Vector::Zero(n);
  for (int j = 0; j < n; ++j) b.dones[j] = rng.uniform() < 0.2 ? 1.0 : 0.0;
  return b;
}

template <typename Net>
void randomise(Net& net, Rng& rng, double range) {
  for (double& p : net.values()) p = rng.uniform(-range, range);
}

}  // namespace

TEST_CASE("critic target: terminal transitions return the reward") {
  Rng rng(1);
  Batch b = random_batch(rng, 8);
  b.dones.setOnes();
  const TwinCritic critic = TwinCritic::create(2, 2, 2, {8}, 3);
  const LevelPolicy sq = SquashedGaussianPolicy::create(2, 2, Vector::Ones(2), {8}, 4);
  const Vector y = compute_critic_target(b, critic, sq, sq, 0.5, 0.99, {}, rng);
  CHECK(y == b.rewards);
}

TEST_CASE("critic target matches a straight-line recomputation") {
  Rng rng(2);
  const Batch b = random_batch(rng, 6);
  TwinCritic critic = TwinCritic::create(2, 2, 2, {8}, 3);
  randomise(critic.q1, rng, 0.5);
  randomise(critic.q2, rng, 0.5);
  const Matrix noise = rng.normal_matrix(2, 6);

  auto sq = SquashedGaussianPolicy::create(2, 2, Vector{{1.0, 2.0}}, {8}, 4);
  randomise(sq.net, rng, 0.5);
  const double alpha = 0.3, gamma = 0.97;
  const Vector y = compute_critic_target(b, critic, sq, sq, alpha, gamma, {}, noise);
  for (int j = 0; j < 6; ++j) {
    const auto head = sq.head(Vector(b.next_states.col(j)), Vector(b.next_goals.col(j)));
    Vector a(2);
    double lp = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sigma = std::exp(head.log_std[i]);
      const double u = head.mean[i] + sigma * noise(i, j);
      a[i] = sq.action_scale[i] * std::tanh(u);
      lp += -0.5 * noise(i, j) * noise(i, j) - std::log(sigma) - 0.5 * std::log(2.0 * M_PI) -
            std::log(sq.action_scale[i] * (1.0 - std::tanh(u) * std::tanh(u)));
    }
    const Vector x = concat(Vector(b.next_states.col(j)), Vector(b.next_goals.col(j)), a);
    const double q = std::min(critic.q1.forward(x)[0], critic.q2.forward(x)[0]);
    const double ref = b.rewards[j] + gamma * (1.0 - b.dones[j]) * (q - alpha * lp);
    CHECK(std::abs(y[j] - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }

  auto det = DeterministicPolicy::create(2, 2, Vector{{1.0, 2.0}}, {8}, 0.1, 5);
  randomise(det.net, rng, 0.5);
  const TargetSmoothing smoothing{0.2, 0.5};
  const Vector yd = compute_critic_target(b, critic, det, det, 123.0, gamma, smoothing, noise);
  for (int j = 0; j < 6; ++j) {
    Vector a = det.action(Vector(b.next_states.col(j)), Vector(b.next_goals.col(j)));
    for (int i = 0; i < 2; ++i) {
      const double s = det.action_scale[i];
      const double eps = std::max(-0.5 * s, std::min(0.5 * s, 0.2 * s * noise(i, j)));
      a[i] = std::max(-s, std::min(s, a[i] + eps));
    }
    const Vector x = concat(Vector(b.next_states.col(j)), Vector(b.next_goals.col(j)), a);
    const double ref =
        b.rewards[j] + gamma * (1.0 - b.dones[j]) * std::min(critic.q1.forward(x)[0], critic.q2.forward(x)[0]);
    CHECK(std::abs(yd[j] - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  // Zero smoothing noise gives the plain TD3 target.
  const Vector y0 = compute_critic_target(b, critic, det, det, 0.0, gamma, {0.0, 0.5}, noise);
  const Matrix mu = det.action(b.next_states, b.next_goals);
  const Vector plain = b.rewards + gamma * (Vector::Ones(6) - b.dones).cwiseProduct(
                                               critic.min_q(b.next_states, b.next_goals, mu));
  CHECK((y0 - plain).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("larger alpha strictly lowers every stochastic target") {
  Rng rng(3);
  Batch b = random_batch(rng, 32);
  b.dones.setZero();
  const TwinCritic critic = TwinCritic::create(2, 2, 2, {8}, 3);
  // A narrow policy has a positive log-density at every sample.
  const LevelPolicy sq = shiro::testing::constant_gaussian(Vector::Zero(2), Vector::Constant(2, -8.0),
                                                           Vector::Ones(2), 2, 2);
  const Matrix noise = rng.normal_matrix(2, 32);
  const Vector y1 = compute_critic_target(b, critic, sq, sq, 0.1, 0.99, {}, noise);
  const Vector y2 = compute_critic_target(b, critic, sq, sq, 0.2, 0.99, {}, noise);
  CHECK(((y2 - y1).array() < 0.0).all());
}

TEST_CASE("critic loss gradient matches finite differences") {
  Rng rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Batch b = random_batch(rng, 5);
    TwinCritic critic = TwinCritic::create(2, 2, 2, {6, 6}, trial);
    randomise(critic.q1, rng, 0.5);
    randomise(critic.q2, rng, 0.5);
    const Vector y = random_matrix(rng, 5, 1).col(0);
    const CriticLossGrad lg = critic_loss_and_grad(critic, b, y);
    auto loss = [&] { return critic_loss_and_grad(critic, b, y).loss; };
    for (std::size_t i = 0; i < critic.q1.num_params(); ++i) {
      worst = std::max(worst, gradient_error(lg.q1_grad.values()[i], central_difference(loss, critic.q1.values()[i])));
      worst = std::max(worst, gradient_error(lg.q2_grad.values()[i], central_difference(loss, critic.q2.values()[i])));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("critic update: fixed point and overfitting") {
  Rng rng(5);
  const Batch b = random_batch(rng, 16);
  TwinCritic critic = TwinCritic::create(2, 2, 2, {16}, 1);
  auto q1_opt = nn::AdamState::for_size(critic.q1.num_params(), 1e-3);
  auto q2_opt = nn::AdamState::for_size(critic.q2.num_params(), 1e-3);

  TwinCritic same = critic;
  same.q2 = same.q1;
  const Vector preds = same.q1.forward(vstack(b.states, b.goals, b.actions)).row(0).transpose();
  const TwinCritic before = same;
  update_critics(same, q1_opt, q2_opt, b, preds);
  CHECK(std::equal(same.q1.values().begin(), same.q1.values().end(), before.q1.values().begin()));

  q1_opt = nn::AdamState::for_size(critic.q1.num_params(), 1e-2);
  q2_opt = nn::AdamState::for_size(critic.q2.num_params(), 1e-2);
  const double first = update_critics(critic, q1_opt, q2_opt, b, b.rewards);
  double last = first;
  for (int i = 0; i < 100; ++i) last = update_critics(critic, q1_opt, q2_opt, b, b.rewards);
  CHECK(last < 0.25 * first);
}

TEST_CASE("SAC actor gradient matches finite differences, with and without the KL term") {
  Rng rng(6);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const Batch b = random_batch(rng, 4, 2, 2, 2, 1.5);
    auto policy = SquashedGaussianPolicy::create(2, 2, Vector{{1.5, 0.5}}, {6}, trial);
    randomise(policy.net, rng, 0.6);
    TwinCritic critic = TwinCritic::create(2, 2, 2, {6}, trial + 10);
    randomise(critic.q1, rng, 0.6);
    randomise(critic.q2, rng, 0.6);
    const Matrix noise = rng.normal_matrix(2, 4);
    LevelPolicy anchor = policy;
    randomise(std::get<SquashedGaussianPolicy>(anchor).net, rng, 0.6);
    const KlPenalty kl = trial % 2 ? KlPenalty{&anchor, 0.7} : KlPenalty{};
    const double alpha = 0.05 + 0.2 * trial;
    const ActorLossGrad lg = sac_actor_loss_and_grad(policy, critic, b, alpha, noise, kl);
    auto loss = [&] { return sac_actor_loss_and_grad(policy, critic, b, alpha, noise, kl).loss; };
    for (std::size_t i = 0; i < policy.net.num_params(); ++i) {
      worst = std::max(worst, gradient_error(lg.grad.values()[i], central_difference(loss, policy.net.values()[i])));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("TD3 actor gradient matches finite differences, with and without the KL term") {
  Rng rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const Batch b = random_batch(rng, 4);
    auto policy = DeterministicPolicy::create(2, 2, Vector{{2.0, 1.0}}, {6}, 0.2, trial);
    randomise(policy.net, rng, 0.6);
    TwinCritic critic = TwinCritic::create(2, 2, 2, {6}, trial + 10);
    randomise(critic.q1, rng, 0.6);
    LevelPolicy anchor = policy;
    randomise(std::get<DeterministicPolicy>(anchor).net, rng, 0.6);
    const KlPenalty kl = trial % 2 ? KlPenalty{&anchor, 0.7} : KlPenalty{};
    const ActorLossGrad lg = td3_actor_loss_and_grad(policy, critic, b, kl);
    auto loss = [&] { return td3_actor_loss_and_grad(policy, critic, b, kl).loss; };
    for (std::size_t i = 0; i < policy.net.num_params(); ++i) {
      worst = std::max(worst, gradient_error(lg.grad.values()[i], central_difference(loss, policy.net.values()[i])));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("actor updates with a null critic") {
  Rng rng(8);
  const Batch b = random_batch(rng, 8);
  TwinCritic zero = TwinCritic::create(2, 2, 2, {8}, 1);
  zero.q1.set_zero();
  zero.q2.set_zero();
  const auto sq = SquashedGaussianPolicy::create(2, 2, Vector::Ones(2), {8}, 2);
  const ActorLossGrad lg = sac_actor_loss_and_grad(sq, zero, b, 0.0, rng.normal_matrix(2, 8));
  for (double g : lg.grad.values()) CHECK(g == 0.0);

  const auto det = DeterministicPolicy::create(2, 2, Vector::Ones(2), {8}, 0.1, 3);
  const ActorLossGrad ld = td3_actor_loss_and_grad(det, zero, b);
  for (double g : ld.grad.values()) CHECK(g == 0.0);

  LevelPolicy wrong = det;
  auto opt = nn::AdamState::for_size(det.net.num_params(), 1e-3);
  CHECK_THROWS_AS(update_actor_sac(wrong, opt, zero, b, 0.1, rng), ContractViolation);
  LevelPolicy wrong2 = sq;
  CHECK_THROWS_AS(update_actor_td3(wrong2, opt, zero, b), ContractViolation);
}

TEST_CASE("large alpha raises policy entropy") {
  Rng rng(9);
  const Batch b = random_batch(rng, 64);
  LevelPolicy policy = SquashedGaussianPolicy::create(2, 2, Vector::Ones(2), {16}, 4);
  const TwinCritic critic = TwinCritic::create(2, 2, 2, {16}, 5);
  auto entropy = [&](const LevelPolicy& p) {
    const auto& sq = std::get<SquashedGaussianPolicy>(p);
    Rng mc(77);
    double h = 0.0;
    int count = 0;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      for (int r = 0; r < 200; ++r, ++count) {
        h -= sq.sample(Vector(b.states.col(j)), Vector(b.goals.col(j)), mc).log_prob;
      }
    }
    return h / count;
  };
  const double before = entropy(policy);
  auto opt = nn::AdamState::for_size(policies::network(policy).num_params(), 1e-3);
  for (int i = 0; i < 20; ++i) update_actor_sac(policy, opt, critic, b, 100.0, rng);
  CHECK(entropy(policy) > before);
}

TEST_CASE("TD3 actor converges on a quadratic bowl") {
  Rng rng(10);
  const Batch b = random_batch(rng, 16);
  const Vector target{{0.3, -0.6}};
  LevelPolicy policy = DeterministicPolicy::create(2, 2, Vector::Ones(2), {16}, 0.1, 1);
  // Critic regressed onto -||a - target||^2 first.
  TwinCritic critic = TwinCritic::create(2, 2, 2, {64, 64}, 2);
  auto q1_opt = nn::AdamState::for_size(critic.q1.num_params(), 3e-3);
  auto q2_opt = nn::AdamState::for_size(critic.q2.num_params(), 3e-3);
  for (int it = 0; it < 1500; ++it) {
    Batch fit = random_batch(rng, 64);
    fit.rewards = -(fit.actions.colwise() - target).colwise().squaredNorm().transpose();
    update_critics(critic, q1_opt, q2_opt, fit, fit.rewards);
  }
  auto opt = nn::AdamState::for_size(policies::network(policy).num_params(), 1e-2);
  for (int i = 0; i < 400; ++i) update_actor_td3(policy, opt, critic, b);
  const Matrix mu = policies::greedy_action(policy, b.states, b.goals);
  CHECK((mu.colwise() - target).cwiseAbs().maxCoeff() < 0.2);
}

TEST_CASE("temperature update signs") {
  const double target = -2.0;
  {
    Temperature t(0.5, target, true);
    const std::vector<double> at_target(8, -target);  // mean log pi = -H_bar, entropy = H_bar
    t.update(at_target);
    CHECK(t.peek() == 0.5);
  }
  {
    Temperature t(0.5, target, true);
    const std::vector<double> high_entropy(8, 0.5);  // entropy -0.5 > -2
    t.update(high_entropy);
    CHECK(t.peek() < 0.5);
  }
  {
    Temperature t(0.5, target, true);
    const std::vector<double> low_entropy(8, 4.0);  // entropy -4 < -2
    t.update(low_entropy);
    CHECK(t.peek() > 0.5);
  }
  Temperature fixed(0.1, target, false);
  CHECK_THROWS_AS(fixed.update(std::vector<double>{1.0}), ContractViolation);
  const Temperature back = Temperature::from_json(nlohmann::json::parse(fixed.to_json().dump()));
  CHECK(back.log_alpha() == fixed.log_alpha());
  CHECK(back.learnable() == fixed.learnable());
}

TEST_CASE("KL penalty") {
  Rng rng(11);
  const Matrix S = random_matrix(rng, 2, 20), G = random_matrix(rng, 2, 20);
  const LevelPolicy a = SquashedGaussianPolicy::create(2, 2, Vector::Ones(2), {8}, 1);
  LevelPolicy b = SquashedGaussianPolicy::create(2, 2, Vector::Ones(2), {8}, 2);
  randomise(std::get<SquashedGaussianPolicy>(b).net, rng, 0.3);
  CHECK(kl_penalized_actor_loss(1.5, a, b, S, G, 0.0) == 1.5);
  CHECK(kl_penalized_actor_loss(1.5, a, a, S, G, 3.0) == 1.5);
  CHECK_THROWS_AS(kl_penalized_actor_loss(1.5, a, b, S, G, -1.0), ContractViolation);
  // Same quantity as the diagnostics module with the roles made explicit.
  const auto stats = diagnostics::policy_kl_gaussian(b, a, S, G);
  const double penalty = kl_penalized_actor_loss(0.0, a, b, S, G, 1.0);
  CHECK(std::abs(penalty - stats.mean_kl) <= 1e-12 * std::max(1.0, penalty));

  const LevelPolicy d0 = DeterministicPolicy::create(2, 2, Vector::Ones(2), {8}, 0.1, 1);
  LevelPolicy d1 = d0;
  randomise(std::get<DeterministicPolicy>(d1).net, rng, 0.3);
  const auto dstats = diagnostics::policy_kl_gaussian(d0, d1, S, G);
  CHECK(std::abs(kl_penalized_actor_loss(0.0, d0, d1, S, G, 1.0) - dstats.mean_kl) <= 1e-12);
}

TEST_CASE("agent configuration validation") {
  AgentLevelConfig c;
  CHECK_NOTHROW(c.validate("low"));
  c.gamma = 1.0;
  CHECK_THROWS_AS(c.validate("low"), ConfigError);
  c = AgentLevelConfig{};
  c.train_interval = 0;
  CHECK_THROWS_AS(c.validate("low"), ConfigError);
  c = AgentLevelConfig{};
  c.kl_penalty_coefficient = -0.1;
  CHECK_THROWS_AS(c.validate("low"), ConfigError);
}

TEST_CASE("deterministic level agent step equals a reference TD3 step") {
  Rng data(12);
  const Batch b = random_batch(data, 16);
  AgentLevelConfig cfg;
  cfg.policy_kind = policies::PolicyKind::kDeterministic;
  cfg.hidden = {16};
  LevelAgent agent(cfg, 2, 2, Vector::Ones(2), 99);
  CHECK_FALSE(agent.temperature().has_value());

  // Reference state copied before any update.
  DeterministicPolicy pi = std::get<DeterministicPolicy>(agent.policy());
  DeterministicPolicy pi_t = pi;
  TwinCritic q = agent.critic();
  TwinCritic q_t = q;
  auto a_opt = nn::AdamState::for_size(pi.net.num_params(), cfg.actor_lr);
  auto q1_opt = nn::AdamState::for_size(q.q1.num_params(), cfg.critic_lr);
  auto q2_opt = nn::AdamState::for_size(q.q2.num_params(), cfg.critic_lr);

  Rng rng_agent(5), rng_ref(5);
  for (int step = 1; step <= 2; ++step) {
    agent.train(b, rng_agent, step);

    // Target with clipped smoothing noise, drawn the same way.
    const Matrix noise = rng_ref.normal_matrix(2, b.size());
    Matrix a2 = pi_t.action(b.next_states, b.next_goals);
    for (Eigen::Index j = 0; j < a2.cols(); ++j)
      for (int i = 0; i < 2; ++i)
        a2(i, j) = std::clamp(a2(i, j) + std::clamp(0.2 * noise(i, j), -0.5, 0.5), -1.0, 1.0);
    const Matrix x2 = vstack(b.next_states, b.next_goals, a2);
    const Matrix q1n = q_t.q1.forward(x2), q2n = q_t.q2.forward(x2);
    Vector y(b.size());
    for (Eigen::Index j = 0; j < b.size(); ++j)
      y[j] = b.rewards[j] + cfg.gamma * (1.0 - b.dones[j]) * std::min(q1n(0, j), q2n(0, j));

    const Matrix x = vstack(b.states, b.goals, b.actions);
    for (auto [net, opt] : {std::pair{&q.q1, &q1_opt}, std::pair{&q.q2, &q2_opt}}) {
      nn::Mlp::Tape tape;
      const Matrix pred = net->forward(x, tape);
      nn::Gradients g = net->make_gradients();
      net->backward(tape, 2.0 * (pred - y.transpose()) / static_cast<double>(b.size()), g);
      nn::adam_step(*net, g, *opt);
    }
    if (step == 2) {
      nn::Mlp::Tape pt, qt;
      const Matrix mu = pi.net.forward(vstack(b.states, b.goals), pt);
      q.q1.forward(vstack(b.states, b.goals, mu), qt);
      const Matrix da = -q.q1.input_gradient(qt, Matrix::Ones(1, b.size())).bottomRows(2) /
                        static_cast<double>(b.size());
      nn::Gradients g = pi.net.make_gradients();
      pi.net.backward(pt, da, g);
      nn::adam_step(pi.net, g, a_opt);
      nn::polyak_update(q_t.q1, q.q1, cfg.tau);
      nn::polyak_update(q_t.q2, q.q2, cfg.tau);
      nn::polyak_update(pi_t.net, pi.net, cfg.tau);
    }
  }
  auto same = [](const nn::Mlp& x, const nn::Mlp& y) {
    return std::equal(x.values().begin(), x.values().end(), y.values().begin());
  };
  CHECK(same(agent.critic().q1, q.q1));
  CHECK(same(agent.critic().q2, q.q2));
  CHECK(same(agent.target_critic().q1, q_t.q1));
  CHECK(same(std::get<DeterministicPolicy>(agent.policy()).net, pi.net));
  CHECK(same(std::get<DeterministicPolicy>(agent.target_policy()).net, pi_t.net));
  CHECK(agent.actor_updates() == 1);
}

TEST_CASE("level agent round-trips and rejects mismatched checkpoints") {
  AgentLevelConfig cfg;
  cfg.policy_kind = policies::PolicyKind::kSquashedGaussian;
  cfg.alpha_learnable = true;
  cfg.hidden = {8};
  LevelAgent agent(cfg, 2, 2, Vector::Ones(2), 1);
  Rng rng(3);
  Rng data(4);
  const Batch b = random_batch(data, 8);
  for (int i = 1; i <= 4; ++i) agent.train(b, rng, i);
  const auto j = nlohmann::json::parse(agent.to_json().dump());
  LevelAgent other(cfg, 2, 2, Vector::Ones(2), 2);
  other.restore(j);
  CHECK(other.to_json() == agent.to_json());

  AgentLevelConfig det_cfg = cfg;
  det_cfg.policy_kind = policies::PolicyKind::kDeterministic;
  LevelAgent det(det_cfg, 2, 2, Vector::Ones(2), 2);
  const auto before = det.to_json();
  CHECK_THROWS_AS(det.restore(j), FormatError);
  CHECK(det.to_json() == before);
}
