#include "rotspace/rotation_io.h"

#include <charconv>
#include <istream>
#include <ostream>
#include <system_error>

namespace rotspace {
namespace {

bool IsBlank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsBlank(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsBlank(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<double> ParseNumbers(std::string_view line, int line_number) {
  std::vector<double> values;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (true) {
    while (p != end && IsBlank(*p)) ++p;
    if (p == end) break;
    // from_chars rejects a leading '+', accept it for hand-written files.
    if (*p == '+') ++p;
    double value = 0.0;
    const auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || (next != end && !IsBlank(*next))) {
      const char* token_end = p;
      while (token_end != end && !IsBlank(*token_end)) ++token_end;
      throw ParseError(line_number,
                       "invalid number '" + std::string(p, token_end) + "'");
    }
    values.push_back(value);
    p = next;
  }
  return values;
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

RotationList ParseRotations(std::istream& in) {
  RotationList list;
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      list.comments.push_back({line_number, std::string(Trim(line.substr(1)))});
      continue;
    }
    const std::vector<double> values = ParseNumbers(line, line_number);
    try {
      if (values.size() == 3) {
        list.rotations.push_back(ExpMap(AxisAngle(values[0], values[1], values[2])));
      } else if (values.size() == 9) {
        Eigen::Matrix3d m;
        m << values[0], values[1], values[2], values[3], values[4], values[5],
            values[6], values[7], values[8];
        list.rotations.emplace_back(m);
      } else {
        throw ParseError(line_number, "expected 3 or 9 numbers, found " +
                                          std::to_string(values.size()));
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_number, e.what());
    }
  }
  if (in.bad()) throw std::runtime_error("read error");
  return list;
}

std::string FormatDouble(double value) {
  char buffer[32];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  return std::string(buffer, end);
}

void WriteAxisAngle(std::ostream& out, const AxisAngle& r) {
  out << FormatDouble(r[0]) << ' ' << FormatDouble(r[1]) << ' ' << FormatDouble(r[2])
      << '\n';
}

void WriteMatrix(std::ostream& out, const RotationMatrix& rotation) {
  for (int i = 0; i < 9; ++i) {
    out << FormatDouble(rotation(i / 3, i % 3)) << (i == 8 ? '\n' : ' ');
  }
}

}  // namespace rotspace
