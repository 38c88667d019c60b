#include "shiro/policies/squashed_gaussian_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shiro/core/error.hpp"
#include "shiro/nn/serialize.hpp"

namespace shiro::policies {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double log_one_minus_tanh_sq(double u) { return 2.0 * (std::numbers::ln2 - u - softplus(-2.0 * u)); }

SquashedGaussianPolicy SquashedGaussianPolicy::create(int state_dim, int goal_dim, const Vector& action_scale,
                                                      const std::vector<int>& hidden, std::uint64_t seed) {
  require((action_scale.array() > 0.0).all(), "action_scale must be positive");
  std::vector<int> sizes{state_dim + goal_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(2 * static_cast<int>(action_scale.size()));
  SquashedGaussianPolicy p;
  p.net = nn::init_mlp(sizes, nn::OutputActivation::kIdentity, seed);
  p.action_scale = action_scale;
  p.state_dim = state_dim;
  p.goal_dim = goal_dim;
  return p;
}

GaussianHead SquashedGaussianPolicy::head(const Vector& state, const Vector& goal) const {
  require(state.size() == state_dim && goal.size() == goal_dim, "policy input dimension mismatch");
  const Vector out = net.forward(concat(state, goal));
  const int k = action_dim();
  return {out.head(k), out.tail(k).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax)};
}

std::pair<Matrix, Matrix> SquashedGaussianPolicy::head(const Matrix& states, const Matrix& goals) const {
  require(states.rows() == state_dim && goals.rows() == goal_dim && states.cols() == goals.cols(),
          "policy batch dimension mismatch");
  const Matrix out = net.forward(vstack(states, goals));
  const int k = action_dim();
  return {out.topRows(k), out.bottomRows(k).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax)};
}

double SquashedGaussianPolicy::log_prob_pre_squash(const GaussianHead& h, const Vector& u) const {
  double lp = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double z = (u[i] - h.mean[i]) * std::exp(-h.log_std[i]);
    lp += -0.5 * z * z - h.log_std[i] - kHalfLog2Pi;
    lp -= std::log(action_scale[i]) + log_one_minus_tanh_sq(u[i]);
  }
  return lp;
}

SquashedGaussianPolicy::Sample SquashedGaussianPolicy::sample(const Vector& state, const Vector& goal,
                                                              Rng& rng) const {
  const GaussianHead h = head(state, goal);
  Sample s;
  s.pre_squash.resize(action_dim());
  s.action.resize(action_dim());
  for (int i = 0; i < action_dim(); ++i) {
    double u = h.mean[i] + std::exp(h.log_std[i]) * rng.normal();
    double t = std::tanh(u);
    if (std::abs(t) > 1.0 - kSquashMargin) {
      // Keep the emitted action strictly inside the open box and report the
      // density at the action actually emitted.
      t = std::copysign(1.0 - kSquashMargin, t);
      u = std::atanh(t);
    }
    s.pre_squash[i] = u;
    s.action[i] = action_scale[i] * t;
  }
  s.log_prob = log_prob_pre_squash(h, s.pre_squash);
  return s;
}

double SquashedGaussianPolicy::log_prob(const Vector& state, const Vector& goal, const Vector& action) const {
  require(action.size() == action_dim(), "log_prob: action dimension mismatch");
  Vector u(action_dim());
  for (int i = 0; i < action_dim(); ++i) {
    const double t = action[i] / action_scale[i];
    if (!(std::abs(t) < 1.0)) {
      throw DomainError("log_prob: action component " + std::to_string(i) +
                        " lies on or outside the open action box");
    }
    u[i] = std::atanh(t);
  }
  return log_prob_pre_squash(head(state, goal), u);
}

Vector SquashedGaussianPolicy::mean_action(const Vector& state, const Vector& goal) const {
  return action_scale.cwiseProduct(Vector(head(state, goal).mean.array().tanh()));
}

Matrix SquashedGaussianPolicy::mean_action(const Matrix& states, const Matrix& goals) const {
  return action_scale.asDiagonal() * Matrix(head(states, goals).first.array().tanh());
}

nlohmann::json to_json(const SquashedGaussianPolicy& policy) {
  return {{"kind", "squashed_gaussian"},
          {"network", nn::to_json(policy.net)},
          {"state_dim", policy.state_dim},
          {"goal_dim", policy.goal_dim},
          {"action_scale", std::vector<double>(policy.action_scale.begin(), policy.action_scale.end())},
          {"log_std_bounds", {kLogStdMin, kLogStdMax}}};
}

SquashedGaussianPolicy squashed_policy_from_json(const nlohmann::json& j) {
  try {
    SquashedGaussianPolicy p;
    p.net = nn::mlp_from_json(j.at("network"));
    p.state_dim = j.at("state_dim").get<int>();
    p.goal_dim = j.at("goal_dim").get<int>();
    const auto scale = j.at("action_scale").get<std::vector<double>>();
    p.action_scale = Eigen::Map<const Vector>(scale.data(), static_cast<Eigen::Index>(scale.size()));
    if (p.net.input_dim() != p.state_dim + p.goal_dim || p.net.output_dim() != 2 * p.action_dim())
      throw FormatError("squashed policy dimensions are inconsistent");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed squashed policy: ") + e.what());
  }
}

}  // namespace shiro::policies
