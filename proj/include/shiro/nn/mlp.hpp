#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "shiro/core/types.hpp"

namespace shiro::nn {

enum class OutputActivation { kIdentity, kTanh };

std::string to_string(OutputActivation act);
OutputActivation output_activation_from_string(const std::string& name);

// Flat parameter storage shaped as a stack of dense layers. Layer i holds a
// (sizes[i+1] x sizes[i]) column-major weight block followed by its bias.
// Shared by Mlp (the parameters) and Gradients (their derivatives), so both
// can be walked as one contiguous span by the optimiser and by Polyak updates.
class LayeredParams {
 public:
  LayeredParams() = default;
  explicit LayeredParams(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  std::size_t num_params() const { return values_.size(); }

  Eigen::Map<Matrix> weight(int layer);
  Eigen::Map<const Matrix> weight(int layer) const;
  Eigen::Map<Vector> bias(int layer);
  Eigen::Map<const Vector> bias(int layer) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const LayeredParams& other) const { return sizes_ == other.sizes_; }
  void set_zero();

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  // Over-aligned so vectorised kernels see the same layout after every copy.
  std::vector<double, Eigen::aligned_allocator<double>> values_;
};

using Gradients = LayeredParams;

// Dense feed-forward network: ReLU hidden layers, identity or tanh output.
class Mlp : public LayeredParams {
 public:
  // Post-activation outputs of every layer for a batch; acts[0] is the input.
  struct Tape {
    std::vector<Matrix> acts;
  };

  Mlp() = default;
  // Zero-initialised parameters.
  Mlp(std::vector<int> layer_sizes, OutputActivation output_activation);

  OutputActivation output_activation() const { return output_activation_; }

  Vector forward(const Vector& x) const;
  // Columns of `x` are independent samples.
  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, Tape& tape) const;

  // Accumulates d(sum_ij upstream_ij * out_ij)/d(params) into `grads` and
  // returns the matching gradient with respect to the input batch.
  Matrix backward(const Tape& tape, const Matrix& upstream, Gradients& grads) const;
  // Input gradient only; parameter gradients are not formed.
  Matrix input_gradient(const Tape& tape, const Matrix& upstream) const;

  Gradients make_gradients() const { return Gradients(layer_sizes()); }

 private:
  OutputActivation output_activation_ = OutputActivation::kIdentity;
};

// Hidden layers uniform in +-1/sqrt(fan_in); the last layer uniform in +-3e-3.
Mlp init_mlp(const std::vector<int>& layer_sizes, OutputActivation output_activation,
             std::uint64_t seed);

// target <- tau * online + (1 - tau) * target
void polyak_update(Mlp& target, const Mlp& online, double tau);

}  // namespace shiro::nn
