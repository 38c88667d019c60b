#include "shiro/harness/plots.hpp"

#include <fstream>
#include <iomanip>

#include "shiro/core/error.hpp"
#include "shiro/diagnostics/final_positions.hpp"
#include "shiro/harness/metrics.hpp"

namespace shiro::harness {

std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
  require(window > 0, "moving_average: window must be positive");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= window) sum -= values[i - window];
    out[i] = sum / static_cast<double>(std::min(i + 1, window));
  }
  return out;
}

namespace {

constexpr std::size_t kSmoothingWindow = 10;

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

std::vector<std::filesystem::path> export_plots(const std::filesystem::path& run_dir) {
  const auto records = read_metrics_file(run_dir / "metrics.jsonl");
  const auto dir = run_dir / "plots";
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  std::vector<double> success, returns;
  for (const auto& r : records) {
    success.push_back(r.success_rate);
    returns.push_back(r.mean_return);
  }
  const auto success_ma = moving_average(success, kSmoothingWindow);
  const auto returns_ma = moving_average(returns, kSmoothingWindow);

  written.push_back(dir / "success_rate.csv");
  {
    auto out = open_csv(written.back());
    out << "step,success_rate_raw,success_rate_ma10,mean_return_raw,mean_return_ma10\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      out << records[i].step << ',' << success[i] << ',' << success_ma[i] << ',' << returns[i] << ','
          << returns_ma[i] << '\n';
    }
  }
  written.push_back(dir / "kl.csv");
  {
    auto out = open_csv(written.back());
    out << "step,kl_mean,kl_max\n";
    for (const auto& r : records) out << r.step << ',' << r.kl_mean << ',' << r.kl_max << '\n';
  }
  written.push_back(dir / "alpha.csv");
  {
    auto out = open_csv(written.back());
    out << "step,alpha_high,alpha_low\n";
    for (const auto& r : records) out << r.step << ',' << r.alpha_high << ',' << r.alpha_low << '\n';
  }
  written.push_back(dir / "losses.csv");
  {
    auto out = open_csv(written.back());
    out << "step,critic_loss_high,critic_loss_low,actor_loss_high,actor_loss_low\n";
    for (const auto& r : records) {
      out << r.step << ',' << r.critic_loss_high << ',' << r.critic_loss_low << ',' << r.actor_loss_high << ','
          << r.actor_loss_low << '\n';
    }
  }
  if (std::ifstream in(run_dir / "final_positions.csv"); in) {
    const auto log = diagnostics::FinalPositionLog::read_csv(in);
    written.push_back(dir / "final_positions.csv");
    auto out = open_csv(written.back());
    log.write_csv(out);
  }
  return written;
}

}  // namespace shiro::harness
