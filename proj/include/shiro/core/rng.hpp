#pragma once

#include <array>
#include <cstdint>

#include "shiro/core/types.hpp"

namespace shiro {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is
// identified by (seed, stream_id); the position inside it is a 64-bit block
// counter plus an index into the current 4-word block. That triple is the
// whole state, so checkpoints store it verbatim.
class Rng {
 public:
  struct State {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;
    std::uint32_t index = 4;
    bool operator==(const State&) const = default;
  };

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);
  explicit Rng(const State& state);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller; consumes exactly two 64-bit draws.
  double normal();
  Vector normal_vector(Eigen::Index n);
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);
  // Uniform integer in [0, n); rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n);

  State state() const { return {seed_, stream_, counter_, index_}; }

  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint32_t index_ = 4;
  std::array<std::uint32_t, 4> block_{};
};

}  // namespace shiro
