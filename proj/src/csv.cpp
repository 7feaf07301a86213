#include "mtconf/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "mtconf/error.hpp"

namespace mtconf::csv {

std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::vector<std::string> split_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return c;
  return std::nullopt;
}

std::vector<double> Table::numeric_column(std::size_t col) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto v = parse_number(rows[r][col]);
    if (!v)
      throw ParseError("non-numeric value '" + rows[r][col] + "' in column '" + header[col] + "'",
                       line_numbers[r], col + 1);
    out.push_back(*v);
  }
  return out;
}

Table read(std::istream& in) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_line(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size())
      throw ParseError("expected " + std::to_string(t.header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  if (!have_header) throw ParseError("empty input: no header row", 0);
  return t;
}

Table read_file(const std::string& path) {
  if (path == "-") return read(std::cin);
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return read(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

void Writer::sep() {
  if (!first_) out_ << ',';
  first_ = false;
}

Writer& Writer::header(std::initializer_list<std::string_view> names) {
  for (auto n : names) field(n);
  end_row();
  return *this;
}

Writer& Writer::field(std::string_view s) {
  sep();
  if (s.find_first_of(",\"\n") == std::string_view::npos) {
    out_ << s;
  } else {
    out_ << '"';
    for (char c : s) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  return *this;
}

Writer& Writer::field(double v) {
  sep();
  out_ << format(v);
  return *this;
}

Writer& Writer::field(std::size_t v) {
  sep();
  out_ << v;
  return *this;
}

Writer& Writer::field(int v) {
  sep();
  out_ << v;
  return *this;
}

void Writer::end_row() {
  out_ << '\n';
  first_ = true;
}

}  // namespace mtconf::csv
