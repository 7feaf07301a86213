#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtconf::csv {

/// Shortest decimal text that parses back to exactly `v`.
std::string format(double v);

/// Strict finite-number parse; nullopt for empty, "NA", "nan", trailing junk.
std::optional<double> parse_number(std::string_view text);

std::vector<std::string> split_line(std::string_view line);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row

  /// Column index by name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  /// Parses column `col` as numbers, throwing ParseError with the line and column on failure.
  std::vector<double> numeric_column(std::size_t col) const;
};

/// Reads a header plus rows; blank lines are skipped, ragged rows rejected.
Table read(std::istream& in);
/// "-" reads stdin.
Table read_file(const std::string& path);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  Writer& header(std::initializer_list<std::string_view> names);
  Writer& field(std::string_view s);
  Writer& field(double v);
  Writer& field(std::size_t v);
  Writer& field(int v);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace mtconf::csv
