#pragma once

#include <cstddef>
#include <vector>

#include "shiro/core/error.hpp"
#include "shiro/core/rng.hpp"

namespace shiro::hrl {

inline constexpr std::size_t kDefaultReplayCapacity = 200000;

// Fixed-capacity ring buffer; the oldest entry is overwritten once full.
// Sampling is uniform with replacement over the current contents.
template <typename T>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = kDefaultReplayCapacity) : capacity_(capacity) {
    require(capacity > 0, "ReplayBuffer: capacity must be positive");
  }

  void push(T item) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(item));
    } else {
      items_[next_] = std::move(item);
    }
    next_ = (next_ + 1) % capacity_;
  }

  std::vector<T> sample(std::size_t n, Rng& rng) const {
    if (items_.empty()) throw ContractViolation("ReplayBuffer::sample: buffer is empty");
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(items_[rng.below(items_.size())]);
    return out;
  }

  std::vector<std::size_t> sample_indices(std::size_t n, Rng& rng) const {
    if (items_.empty()) throw ContractViolation("ReplayBuffer::sample: buffer is empty");
    std::vector<std::size_t> out(n);
    for (auto& i : out) i = rng.below(items_.size());
    return out;
  }

  // Storage order, not insertion order, once the ring has wrapped.
  const T& at(std::size_t i) const { return items_.at(i); }
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  std::size_t write_position() const { return next_; }

  // Restores a buffer from its raw storage (checkpoint resume).
  void restore(std::vector<T> items, std::size_t write_position) {
    require(items.size() <= capacity_ && write_position < capacity_, "ReplayBuffer::restore: bad state");
    items_ = std::move(items);
    next_ = write_position;
  }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<T> items_;
};

}  // namespace shiro::hrl
