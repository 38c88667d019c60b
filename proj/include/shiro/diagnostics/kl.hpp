#pragma once

#include <cstdint>
#include <iosfwd>

#include "shiro/core/types.hpp"
#include "shiro/policies/level_policy.hpp"

namespace shiro::diagnostics {

// KL(N(mu_p, diag(std_p^2)) || N(mu_q, diag(std_q^2))) in closed form:
// 1/2 [log|S_q|/|S_p| - k + dmu^T S_q^-1 dmu + tr(S_q^-1 S_p)].
double kl_diag_gaussian(const Vector& mu_p, const Vector& std_p, const Vector& mu_q, const Vector& std_q);

// Shared isotropic noise: 1/2 (mu_new - mu_old)^T (sigma^2 I)^-1 (mu_new - mu_old).
double kl_fixed_covariance(const Vector& mu_old, const Vector& mu_new, const Vector& sigma);

struct KlStats {
  double mean_kl = 0.0;
  double max_kl = 0.0;
};

// KL(old || new) per probe column, aggregated. Deterministic policies are
// treated as N(mu, diag(exploration_sigma^2)); squashed policies are
// compared through their pre-squash Gaussians (tanh is a shared bijection,
// so the divergence is unchanged by squashing).
KlStats policy_kl_gaussian(const policies::LevelPolicy& old_policy, const policies::LevelPolicy& new_policy,
                           const Matrix& probe_states, const Matrix& probe_goals);

// TV <= sqrt(KL / 2).
double pinsker_epsilon(double max_kl);

struct KlRecord {
  std::int64_t env_step = 0;
  double mean_kl = 0.0;
  double max_kl = 0.0;
  double pinsker_epsilon = 0.0;
  double bound_2ec = 0.0;

  static KlRecord make(std::int64_t env_step, const KlStats& stats, int c);
};

// step,mean_kl,max_kl,epsilon,bound
void write_kl_csv_header(std::ostream& out);
void write_kl_csv_row(std::ostream& out, const KlRecord& record);

}  // namespace shiro::diagnostics
