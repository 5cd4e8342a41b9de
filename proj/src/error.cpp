#include "smfkit/error.hpp"

namespace smfkit {
namespace {

std::string compose(const std::string& detail, std::optional<std::size_t> offset) {
  if (!offset) return detail;
  return detail + " (at byte " + std::to_string(*offset) + ")";
}

}  // namespace

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::range: return "range";
    case Errc::truncated: return "truncated";
    case Errc::malformed_vlv: return "malformed-vlv";
    case Errc::malformed_data: return "malformed-data";
    case Errc::orphan_data: return "orphan-data";
    case Errc::unsupported_status: return "unsupported-status";
    case Errc::bad_magic: return "bad-magic";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::smpte_division: return "smpte-division";
    case Errc::invariant: return "invariant";
    case Errc::strict: return "strict";
    case Errc::syntax: return "syntax";
  }
  return "unknown";
}

Error::Error(Errc code, std::string detail, std::optional<std::size_t> offset)
    : std::runtime_error(compose(detail, offset)),
      code_(code),
      detail_(std::move(detail)),
      offset_(offset) {}

Error Error::rebased(std::size_t base) const {
  return Error(code_, detail_, offset_ ? std::optional<std::size_t>(*offset_ + base) : std::nullopt);
}

SyntaxError::SyntaxError(Errc code, std::string detail, std::size_t line, std::size_t column)
    : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + detail),
      line_(line),
      column_(column) {}

std::string Diagnostic::to_string() const {
  if (!offset) return message;
  return message + " (at byte " + std::to_string(*offset) + ")";
}

}  // namespace smfkit
