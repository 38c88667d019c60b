#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace shiro::harness {

struct MetricsRecord {
  std::int64_t step = 0;
  double success_rate = 0.0;
  double mean_return = 0.0;
  double kl_mean = 0.0;
  double kl_max = 0.0;
  double alpha_high = 0.0;
  double alpha_low = 0.0;
  double critic_loss_high = 0.0;
  double critic_loss_low = 0.0;
  double actor_loss_high = 0.0;
  double actor_loss_low = 0.0;
  double wall_time_s = 0.0;

  bool operator==(const MetricsRecord&) const = default;
};

inline constexpr const char* kMetricsKeys[] = {"step",           "success_rate",    "mean_return",     "kl_mean",
                                               "kl_max",         "alpha_high",      "alpha_low",       "critic_loss_high",
                                               "critic_loss_low", "actor_loss_high", "actor_loss_low", "wall_time_s"};

nlohmann::json to_json(const MetricsRecord& r);
// Requires exactly the schema keys; throws FormatError otherwise.
MetricsRecord metrics_record_from_json(const nlohmann::json& j);
std::string to_line(const MetricsRecord& r);
MetricsRecord parse_metrics_line(const std::string& line);
std::vector<MetricsRecord> read_metrics_file(const std::filesystem::path& path);

// JSONL writer that enforces strictly increasing steps and flushes per record.
class MetricsSink {
 public:
  MetricsSink() = default;
  // Appends to an existing file; `last_step` continues monotonicity checks.
  explicit MetricsSink(const std::filesystem::path& path, std::optional<std::int64_t> last_step = std::nullopt);

  bool is_open() const { return out_.is_open(); }
  std::optional<std::int64_t> last_step() const { return last_step_; }
  void emit(const MetricsRecord& record);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::optional<std::int64_t> last_step_;
};

}  // namespace shiro::harness
