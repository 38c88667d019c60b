#pragma once

#include <filesystem>

#include "shiro/harness/trainer.hpp"

namespace shiro::harness {

inline constexpr int kCheckpointVersion = 1;

// Writes atomically via a temporary file and rename.
void save_checkpoint(const Trainer& trainer, const std::filesystem::path& path);

// Throws FormatError on a missing, truncated, corrupt or wrong-version file;
// nothing is constructed unless the whole file parses.
Trainer load_checkpoint(const std::filesystem::path& path, std::filesystem::path out_dir = {});

// Reads only the config and policies, for evaluation and KL checks.
struct CheckpointPolicies {
  RunConfig config;
  std::int64_t env_step = 0;
  std::optional<policies::LevelPolicy> high;
  policies::LevelPolicy low;
};
CheckpointPolicies load_checkpoint_policies(const std::filesystem::path& path);

}  // namespace shiro::harness
