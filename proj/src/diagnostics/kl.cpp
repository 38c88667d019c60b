#include "shiro/diagnostics/kl.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "shiro/core/error.hpp"

namespace shiro::diagnostics {

using policies::DeterministicPolicy;
using policies::SquashedGaussianPolicy;

double kl_diag_gaussian(const Vector& mu_p, const Vector& std_p, const Vector& mu_q, const Vector& std_q) {
  const auto k = mu_p.size();
  require(std_p.size() == k && mu_q.size() == k && std_q.size() == k, "kl_diag_gaussian: dimension mismatch");
  require((std_p.array() > 0.0).all() && (std_q.array() > 0.0).all(), "kl_diag_gaussian: std must be positive");
  double log_det_ratio = 0.0, mahalanobis = 0.0, trace = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double var_p = std_p[i] * std_p[i];
    const double var_q = std_q[i] * std_q[i];
    const double d = mu_q[i] - mu_p[i];
    log_det_ratio += std::log(var_q) - std::log(var_p);
    mahalanobis += d * d / var_q;
    trace += var_p / var_q;
  }
  return 0.5 * (log_det_ratio - static_cast<double>(k) + mahalanobis + trace);
}

double kl_fixed_covariance(const Vector& mu_old, const Vector& mu_new, const Vector& sigma) {
  require(mu_old.size() == mu_new.size() && sigma.size() == mu_old.size(), "kl_fixed_covariance: dimension mismatch");
  double kl = 0.0;
  for (Eigen::Index i = 0; i < mu_old.size(); ++i) {
    const double d = mu_new[i] - mu_old[i];
    kl += d * d / (sigma[i] * sigma[i]);
  }
  return 0.5 * kl;
}

KlStats policy_kl_gaussian(const policies::LevelPolicy& old_policy, const policies::LevelPolicy& new_policy,
                           const Matrix& probe_states, const Matrix& probe_goals) {
  require(probe_states.cols() > 0, "policy_kl_gaussian: no probe states");
  require(probe_states.cols() == probe_goals.cols(), "policy_kl_gaussian: probe batch mismatch");
  require(policies::kind_of(old_policy) == policies::kind_of(new_policy), "policy_kl_gaussian: policy kinds differ");
  require(policies::action_dim(old_policy) == policies::action_dim(new_policy),
          "policy_kl_gaussian: action dimensions differ");
  const auto n = probe_states.cols();
  KlStats stats;
  auto accumulate = [&](double kl) {
    stats.mean_kl += kl;
    stats.max_kl = std::max(stats.max_kl, kl);
  };
  if (const auto* det_old = std::get_if<DeterministicPolicy>(&old_policy)) {
    const auto& det_new = std::get<DeterministicPolicy>(new_policy);
    require(det_old->exploration_sigma == det_new.exploration_sigma,
            "policy_kl_gaussian: deterministic policies must share their exploration noise");
    const Matrix mu_old = det_old->action(probe_states, probe_goals);
    const Matrix mu_new = det_new.action(probe_states, probe_goals);
    for (Eigen::Index j = 0; j < n; ++j)
      accumulate(kl_fixed_covariance(mu_old.col(j), mu_new.col(j), det_old->exploration_sigma));
  } else {
    const auto [m_old, s_old] = std::get<SquashedGaussianPolicy>(old_policy).head(probe_states, probe_goals);
    const auto [m_new, s_new] = std::get<SquashedGaussianPolicy>(new_policy).head(probe_states, probe_goals);
    for (Eigen::Index j = 0; j < n; ++j) {
      accumulate(kl_diag_gaussian(m_old.col(j), s_old.col(j).array().exp().matrix(), m_new.col(j),
                                  s_new.col(j).array().exp().matrix()));
    }
  }
  stats.mean_kl /= static_cast<double>(n);
  return stats;
}

double pinsker_epsilon(double max_kl) {
  if (!(max_kl >= 0.0)) throw ContractViolation("pinsker_epsilon: KL must be non-negative");
  return std::sqrt(max_kl / 2.0);
}

KlRecord KlRecord::make(std::int64_t env_step, const KlStats& stats, int c) {
  KlRecord r;
  r.env_step = env_step;
  r.mean_kl = stats.mean_kl;
  r.max_kl = stats.max_kl;
  r.pinsker_epsilon = diagnostics::pinsker_epsilon(stats.max_kl);
  r.bound_2ec = 2.0 * r.pinsker_epsilon * c;
  return r;
}

void write_kl_csv_header(std::ostream& out) { out << "step,mean_kl,max_kl,epsilon,bound\n"; }

void write_kl_csv_row(std::ostream& out, const KlRecord& r) {
  out << r.env_step << ',' << std::setprecision(17) << r.mean_kl << ',' << r.max_kl << ',' << r.pinsker_epsilon
      << ',' << r.bound_2ec << '\n';
}

}  // namespace shiro::diagnostics
