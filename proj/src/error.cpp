#include "mtconf/error.hpp"

namespace mtconf {

namespace {
std::string locate(const std::string& what, std::size_t line, std::size_t column) {
  if (line == 0) return what;
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ", column " + std::to_string(column);
  return out + ": " + what;
}
}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(locate(what, line, column)), line_(line), column_(column), message_(what) {}

}  // namespace mtconf
