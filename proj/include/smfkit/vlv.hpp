#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "smfkit/error.hpp"

namespace smfkit {

// Delta times and meta lengths are stored as Variable Length Values: 7-bit
// groups, most significant first, continuation flagged by the top bit.
using Ticks = std::uint32_t;

inline constexpr Ticks kMaxVlv = 0x0FFFFFFF;
inline constexpr std::size_t kMaxVlvBytes = 4;

// Encoded form of one VLV; at most four bytes, no heap allocation.
struct VlvBytes {
  std::array<std::uint8_t, kMaxVlvBytes> data{};
  std::size_t size = 0;

  const std::uint8_t* begin() const { return data.data(); }
  const std::uint8_t* end() const { return data.data() + size; }
  ByteView view() const { return {data.data(), size}; }
};

struct VlvDecoded {
  Ticks value = 0;
  std::size_t consumed = 0;

  bool operator==(const VlvDecoded&) const = default;
};

// Shortest-form encoding. Throws Errc::range above kMaxVlv.
VlvBytes encode_vlv(Ticks value);

// Appends the encoding of `value` to `out`.
void append_vlv(Bytes& out, Ticks value);

// Number of bytes encode_vlv(value) produces.
constexpr std::size_t vlv_length(Ticks value) noexcept {
  if (value < (1u << 7)) return 1;
  if (value < (1u << 14)) return 2;
  if (value < (1u << 21)) return 3;
  return 4;
}

// Reads one VLV from the front of `bytes`. Never reads past the terminating
// byte. Non-canonical encodings (leading 0x80 groups) are accepted unless
// `strict` is set. Throws Errc::truncated if the input ends first and
// Errc::malformed_vlv when four bytes pass without a terminator.
VlvDecoded decode_vlv(ByteView bytes, bool strict = false);

}  // namespace smfkit
