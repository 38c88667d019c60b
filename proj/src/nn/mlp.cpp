#include "shiro/nn/mlp.hpp"

#include <cmath>

#include "shiro/core/error.hpp"
#include "shiro/core/rng.hpp"

namespace shiro::nn {

std::string to_string(OutputActivation act) {
  return act == OutputActivation::kTanh ? "tanh" : "identity";
}

OutputActivation output_activation_from_string(const std::string& name) {
  if (name == "identity") return OutputActivation::kIdentity;
  if (name == "tanh") return OutputActivation::kTanh;
  throw FormatError("unknown output activation '" + name + "'");
}

LayeredParams::LayeredParams(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  require(sizes_.size() >= 2, "an MLP needs at least an input and an output size");
  std::size_t offset = 0;
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    require(sizes_[i] > 0 && sizes_[i + 1] > 0, "layer sizes must be positive");
    offsets_.push_back(offset);
    offset += static_cast<std::size_t>(sizes_[i + 1]) * (sizes_[i] + 1);
  }
  values_.assign(offset, 0.0);
}

Eigen::Map<Matrix> LayeredParams::weight(int layer) {
  return {values_.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const Matrix> LayeredParams::weight(int layer) const {
  return {values_.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<Vector> LayeredParams::bias(int layer) {
  return {values_.data() + offsets_[layer] + static_cast<std::size_t>(sizes_[layer + 1]) * sizes_[layer],
          sizes_[layer + 1]};
}

Eigen::Map<const Vector> LayeredParams::bias(int layer) const {
  return {values_.data() + offsets_[layer] + static_cast<std::size_t>(sizes_[layer + 1]) * sizes_[layer],
          sizes_[layer + 1]};
}

void LayeredParams::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation output_activation)
    : LayeredParams(std::move(layer_sizes)), output_activation_(output_activation) {}

Vector Mlp::forward(const Vector& x) const {
  require(x.size() == input_dim(), "forward: input has " + std::to_string(x.size()) +
                                       " entries, network expects " + std::to_string(input_dim()));
  Vector h = x;
  for (int i = 0; i < num_layers(); ++i) {
    Vector z = weight(i) * h + bias(i);
    if (i + 1 < num_layers()) {
      h = z.cwiseMax(0.0);
    } else {
      h = output_activation_ == OutputActivation::kTanh ? Vector(z.array().tanh()) : z;
    }
  }
  return h;
}

Matrix Mlp::forward(const Matrix& x) const {
  require(x.rows() == input_dim(), "forward: batch rows do not match network input size");
  Matrix h = x;
  for (int i = 0; i < num_layers(); ++i) {
    Matrix z = weight(i) * h;
    z.colwise() += bias(i);
    if (i + 1 < num_layers()) {
      h = z.cwiseMax(0.0);
    } else {
      h = output_activation_ == OutputActivation::kTanh ? Matrix(z.array().tanh()) : z;
    }
  }
  return h;
}

Matrix Mlp::forward(const Matrix& x, Tape& tape) const {
  require(x.rows() == input_dim(), "forward: batch rows do not match network input size");
  tape.acts.resize(num_layers() + 1);
  tape.acts[0] = x;
  for (int i = 0; i < num_layers(); ++i) {
    Matrix z = weight(i) * tape.acts[i];
    z.colwise() += bias(i);
    if (i + 1 < num_layers()) {
      tape.acts[i + 1] = z.cwiseMax(0.0);
    } else {
      tape.acts[i + 1] = output_activation_ == OutputActivation::kTanh ? Matrix(z.array().tanh()) : z;
    }
  }
  return tape.acts.back();
}

Matrix Mlp::backward(const Tape& tape, const Matrix& upstream, Gradients& grads) const {
  require(static_cast<int>(tape.acts.size()) == num_layers() + 1, "backward: tape does not match network");
  require(upstream.rows() == output_dim() && upstream.cols() == tape.acts[0].cols(),
          "backward: upstream shape does not match network output");
  require(grads.same_shape(*this), "backward: gradient buffer has a different architecture");

  Matrix delta = upstream;
  if (output_activation_ == OutputActivation::kTanh) {
    delta.array() *= 1.0 - tape.acts.back().array().square();
  }
  for (int i = num_layers() - 1; i >= 0; --i) {
    grads.weight(i).noalias() += delta * tape.acts[i].transpose();
    grads.bias(i) += delta.rowwise().sum();
    Matrix next = weight(i).transpose() * delta;
    if (i > 0) {
      // ReLU'(0) is taken as 0.
      next.array() *= (tape.acts[i].array() > 0.0).cast<double>();
    }
    delta = std::move(next);
  }
  return delta;
}

Matrix Mlp::input_gradient(const Tape& tape, const Matrix& upstream) const {
  require(static_cast<int>(tape.acts.size()) == num_layers() + 1, "input_gradient: tape does not match network");
  require(upstream.rows() == output_dim() && upstream.cols() == tape.acts[0].cols(),
          "input_gradient: upstream shape does not match network output");
  Matrix delta = upstream;
  if (output_activation_ == OutputActivation::kTanh) {
    delta.array() *= 1.0 - tape.acts.back().array().square();
  }
  for (int i = num_layers() - 1; i >= 0; --i) {
    Matrix next = weight(i).transpose() * delta;
    if (i > 0) next.array() *= (tape.acts[i].array() > 0.0).cast<double>();
    delta = std::move(next);
  }
  return delta;
}

Mlp init_mlp(const std::vector<int>& layer_sizes, OutputActivation output_activation,
             std::uint64_t seed) {
  Mlp net(layer_sizes, output_activation);
  Rng rng(seed, /*stream=*/0x6d6c70);
  for (int i = 0; i < net.num_layers(); ++i) {
    const bool last = i + 1 == net.num_layers();
    const double bound = last ? 3e-3 : 1.0 / std::sqrt(static_cast<double>(layer_sizes[i]));
    auto w = net.weight(i);
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = rng.uniform(-bound, bound);
    auto b = net.bias(i);
    for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = rng.uniform(-bound, bound);
  }
  return net;
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  require(target.same_shape(online), "polyak_update: architectures differ");
  require(tau >= 0.0 && tau <= 1.0, "polyak_update: tau must lie in [0, 1]");
  auto t = target.values();
  auto o = online.values();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = tau * o[i] + (1.0 - tau) * t[i];
}

}  // namespace shiro::nn
