#include "shiro/harness/metrics.hpp"

#include "shiro/core/error.hpp"

namespace shiro::harness {

using json = nlohmann::json;

json to_json(const MetricsRecord& r) {
  json j;
  j["step"] = r.step;
  j["success_rate"] = r.success_rate;
  j["mean_return"] = r.mean_return;
  j["kl_mean"] = r.kl_mean;
  j["kl_max"] = r.kl_max;
  j["alpha_high"] = r.alpha_high;
  j["alpha_low"] = r.alpha_low;
  j["critic_loss_high"] = r.critic_loss_high;
  j["critic_loss_low"] = r.critic_loss_low;
  j["actor_loss_high"] = r.actor_loss_high;
  j["actor_loss_low"] = r.actor_loss_low;
  j["wall_time_s"] = r.wall_time_s;
  return j;
}

MetricsRecord metrics_record_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("metrics record must be a JSON object");
  if (j.size() != std::size(kMetricsKeys)) throw FormatError("metrics record has unexpected keys");
  for (const char* key : kMetricsKeys) {
    if (!j.contains(key)) throw FormatError(std::string("metrics record is missing '") + key + "'");
    if (!j.at(key).is_number()) throw FormatError(std::string("metrics field '") + key + "' is not a number");
  }
  if (!j.at("step").is_number_integer()) throw FormatError("metrics field 'step' is not an integer");
  MetricsRecord r;
  r.step = j.at("step").get<std::int64_t>();
  r.success_rate = j.at("success_rate").get<double>();
  r.mean_return = j.at("mean_return").get<double>();
  r.kl_mean = j.at("kl_mean").get<double>();
  r.kl_max = j.at("kl_max").get<double>();
  r.alpha_high = j.at("alpha_high").get<double>();
  r.alpha_low = j.at("alpha_low").get<double>();
  r.critic_loss_high = j.at("critic_loss_high").get<double>();
  r.critic_loss_low = j.at("critic_loss_low").get<double>();
  r.actor_loss_high = j.at("actor_loss_high").get<double>();
  r.actor_loss_low = j.at("actor_loss_low").get<double>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

std::string to_line(const MetricsRecord& r) { return to_json(r).dump(); }

MetricsRecord parse_metrics_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(std::string("metrics line is not valid JSON: ") + e.what());
  }
  return metrics_record_from_json(j);
}

std::vector<MetricsRecord> read_metrics_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open metrics file " + path.string());
  std::vector<MetricsRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_metrics_line(line));
  }
  return out;
}

MetricsSink::MetricsSink(const std::filesystem::path& path, std::optional<std::int64_t> last_step)
    : out_(path, std::ios::app), path_(path), last_step_(last_step) {
  if (!out_) throw std::runtime_error("cannot open metrics file " + path.string());
}

void MetricsSink::emit(const MetricsRecord& record) {
  if (last_step_ && record.step <= *last_step_) {
    throw ContractViolation("metrics step " + std::to_string(record.step) + " does not follow step " +
                            std::to_string(*last_step_));
  }
  if (out_.is_open()) {
    out_ << to_line(record) << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("failed to write metrics to " + path_.string());
  }
  last_step_ = record.step;
}

}  // namespace shiro::harness
