#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace smfkit {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class Errc {
  range,               // a field value is outside its domain
  truncated,           // input ended inside a value
  malformed_vlv,       // four VLV bytes without a terminator, or non-canonical in strict mode
  malformed_data,      // byte with the top bit set where a data byte is required
  orphan_data,         // data byte with no status and no running status
  unsupported_status,  // system status byte that cannot appear in a file
  bad_magic,           // chunk type not what the container requires
  length_mismatch,     // declared chunk length disagrees with content
  smpte_division,      // negative (SMPTE) time division
  invariant,           // a structural invariant does not hold
  strict,              // a warning upgraded to an error in strict mode
  syntax,              // text input could not be parsed
};

const char* errc_name(Errc code) noexcept;

// Structured error for everything the library rejects. Byte-level errors
// carry the offset of the offending byte relative to the input given to the
// public entry point.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail, std::optional<std::size_t> offset = std::nullopt);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

  // Same error with the offset shifted by `base` (used when a sub-parser
  // works on a slice of a larger buffer).
  Error rebased(std::size_t base) const;

 private:
  Errc code_;
  std::string detail_;
  std::optional<std::size_t> offset_;
};

// Error in line-oriented text input (score DSL, hex listings). Lines and
// columns are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(Errc code, std::string detail, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Non-fatal finding collected by parsers; strict mode turns these into
// Errc::strict errors instead.
struct Diagnostic {
  std::optional<std::size_t> offset;
  std::string message;

  std::string to_string() const;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace smfkit
