#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "shiro/core/rng.hpp"
#include "shiro/core/types.hpp"

namespace shiro::testing {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  return random_matrix(rng, n, 1, lo, hi).col(0);
}

// Relative error with an absolute floor for tiny gradients.
inline double gradient_error(double analytic, double numeric) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  if (scale < 1e-8) return std::abs(analytic - numeric);
  return std::abs(analytic - numeric) / scale;
}

// Central difference of f with respect to x[i].
inline double central_difference(const std::function<double()>& f, double& x, double h = 1e-5) {
  const double saved = x;
  x = saved + h;
  const double up = f();
  x = saved - h;
  const double down = f();
  x = saved;
  return (up - down) / (2.0 * h);
}

}  // namespace shiro::testing

#include "shiro/policies/deterministic_policy.hpp"
#include "shiro/policies/squashed_gaussian_policy.hpp"

namespace shiro::testing {

// Squashed policy whose head ignores its input: mean and log-std are biases.
inline policies::SquashedGaussianPolicy constant_gaussian(const Vector& mean, const Vector& log_std,
                                                          const Vector& scale, int state_dim = 1, int goal_dim = 1) {
  auto p = policies::SquashedGaussianPolicy::create(state_dim, goal_dim, scale, {4}, 0);
  p.net.set_zero();
  const int last = p.net.num_layers() - 1;
  p.net.bias(last).head(mean.size()) = mean;
  p.net.bias(last).tail(log_std.size()) = log_std;
  return p;
}

// Deterministic policy with mean scale * tanh(pre) regardless of input.
inline policies::DeterministicPolicy constant_deterministic(const Vector& pre, const Vector& scale,
                                                            double sigma_fraction = 0.1, int state_dim = 1,
                                                            int goal_dim = 1) {
  auto p = policies::DeterministicPolicy::create(state_dim, goal_dim, scale, {4}, sigma_fraction, 0);
  p.net.set_zero();
  p.net.bias(p.net.num_layers() - 1) = pre;
  return p;
}

}  // namespace shiro::testing
