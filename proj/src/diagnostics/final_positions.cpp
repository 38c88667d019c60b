#include "shiro/diagnostics/final_positions.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "shiro/core/error.hpp"

namespace shiro::diagnostics {

void FinalPositionLog::record(const Vector& terminal_state, bool success) {
  require(terminal_state.size() >= 2, "FinalPositionLog: state needs x and y");
  rows_.push_back({static_cast<std::int64_t>(rows_.size()), terminal_state[0], terminal_state[1], success});
}

void FinalPositionLog::write_csv_header(std::ostream& out) { out << "episode,x,y,success\n"; }

void FinalPositionLog::write_csv_row(std::ostream& out, const Row& r) {
  out << std::setprecision(17) << r.episode << ',' << r.x << ',' << r.y << ',' << (r.success ? 1 : 0) << '\n';
}

void FinalPositionLog::write_csv(std::ostream& out) const {
  write_csv_header(out);
  for (const Row& r : rows_) write_csv_row(out, r);
}

FinalPositionLog FinalPositionLog::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "episode,x,y,success") throw FormatError("final positions: bad header");
  FinalPositionLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string episode, x, y, success;
    if (!std::getline(fields, episode, ',') || !std::getline(fields, x, ',') || !std::getline(fields, y, ',') ||
        !std::getline(fields, success)) {
      throw FormatError("final positions: malformed row '" + line + "'");
    }
    try {
      log.rows_.push_back({std::stoll(episode), std::stod(x), std::stod(y), success == "1"});
    } catch (const std::exception&) {
      throw FormatError("final positions: malformed row '" + line + "'");
    }
  }
  return log;
}

}  // namespace shiro::diagnostics
