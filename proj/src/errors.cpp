#include "stvmanip/errors.hpp"

namespace stvm {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::malformed_header:
      return "malformed header";
    case ParseErrorKind::malformed_line:
      return "malformed line";
    case ParseErrorKind::bad_weight:
      return "bad weight";
    case ParseErrorKind::wrong_length:
      return "wrong ranking length";
    case ParseErrorKind::unknown_candidate:
      return "unknown candidate";
    case ParseErrorKind::duplicate_candidate:
      return "duplicate candidate";
  }
  return "parse error";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": " + to_string(kind) +
                         (detail.empty() ? "" : " (" + detail + ")")),
      kind_(kind),
      line_(line) {}

}  // namespace stvm
