#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace shiro::harness {

// Trailing moving average; the first window-1 points average what exists.
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

// Reads a run directory and writes CSV series under <run>/plots/. Returns
// the files written.
std::vector<std::filesystem::path> export_plots(const std::filesystem::path& run_dir);

}  // namespace shiro::harness
