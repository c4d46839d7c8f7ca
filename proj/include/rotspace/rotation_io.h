#ifndef ROTSPACE_ROTATION_IO_H_
#define ROTSPACE_ROTATION_IO_H_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rotspace/rotation.h"

namespace rotspace {

// Text format: one rotation per line, either 3 numbers (axis-angle) or 9
// numbers (row-major matrix), separated by whitespace. Lines starting with
// '#' are comments; blank lines are skipped.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct CommentLine {
  int line = 0;
  std::string text;  // without the leading '#' and surrounding blanks
};

struct RotationList {
  std::vector<RotationMatrix> rotations;
  std::vector<CommentLine> comments;
};

RotationList ParseRotations(std::istream& in);

// Shortest round-trip independent of the locale: 17 significant digits.
std::string FormatDouble(double value);

void WriteAxisAngle(std::ostream& out, const AxisAngle& r);
void WriteMatrix(std::ostream& out, const RotationMatrix& rotation);

}  // namespace rotspace

#endif  // ROTSPACE_ROTATION_IO_H_
