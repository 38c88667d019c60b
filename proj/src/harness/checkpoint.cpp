#include "shiro/harness/checkpoint.hpp"

#include <fstream>

#include "shiro/core/error.hpp"

namespace shiro::harness {

using json = nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("checkpoint " + path.string() + " is truncated or corrupt: " + e.what());
  }
}

void check_version(const json& j) {
  if (!j.is_object() || !j.contains("version") || !j.at("version").is_number_integer())
    throw FormatError("checkpoint has no version field");
  const int version = j.at("version").get<int>();
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  }
}

}  // namespace

void save_checkpoint(const Trainer& trainer, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << trainer.to_json().dump() << '\n';
    if (!out) throw std::runtime_error("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Trainer load_checkpoint(const std::filesystem::path& path, std::filesystem::path out_dir) {
  const json j = read_json_file(path);
  check_version(j);
  return Trainer::from_json(j, std::move(out_dir));
}

CheckpointPolicies load_checkpoint_policies(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  check_version(j);
  try {
    CheckpointPolicies out{run_config_from_json(j.at("config")), j.at("env_step").get<std::int64_t>(), std::nullopt,
                           policies::level_policy_from_json(j.at("low").at("policy"))};
    if (!j.at("high").is_null()) out.high = policies::level_policy_from_json(j.at("high").at("policy"));
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint config is invalid: ") + e.what());
  }
}

}  // namespace shiro::harness
