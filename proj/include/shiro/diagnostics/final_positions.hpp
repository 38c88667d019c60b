#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "shiro/core/types.hpp"

namespace shiro::diagnostics {

// Append-only log of where each episode ended.
class FinalPositionLog {
 public:
  struct Row {
    std::int64_t episode = 0;
    double x = 0.0;
    double y = 0.0;
    bool success = false;
    bool operator==(const Row&) const = default;
  };

  void record(const Vector& terminal_state, bool success);
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  void restore(std::vector<Row> rows) { rows_ = std::move(rows); }

  // episode,x,y,success with 17 significant digits.
  void write_csv(std::ostream& out) const;
  static void write_csv_header(std::ostream& out);
  static void write_csv_row(std::ostream& out, const Row& row);
  static FinalPositionLog read_csv(std::istream& in);

 private:
  std::vector<Row> rows_;
};

}  // namespace shiro::diagnostics
