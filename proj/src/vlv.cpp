#include "smfkit/vlv.hpp"

#include <string>

namespace smfkit {

VlvBytes encode_vlv(Ticks value) {
  if (value > kMaxVlv) {
    throw Error(Errc::range, "VLV value " + std::to_string(value) + " exceeds 0x0FFFFFFF");
  }
  VlvBytes out;
  out.size = vlv_length(value);
  for (std::size_t i = 0; i < out.size; ++i) {
    const auto shift = 7 * (out.size - 1 - i);
    auto group = static_cast<std::uint8_t>((value >> shift) & 0x7F);
    if (i + 1 < out.size) group |= 0x80;
    out.data[i] = group;
  }
  return out;
}

void append_vlv(Bytes& out, Ticks value) {
  const auto encoded = encode_vlv(value);
  out.insert(out.end(), encoded.begin(), encoded.end());
}

VlvDecoded decode_vlv(ByteView bytes, bool strict) {
  Ticks value = 0;
  for (std::size_t i = 0; i < kMaxVlvBytes; ++i) {
    if (i >= bytes.size()) {
      throw Error(Errc::truncated, "input ends inside a variable-length value", i);
    }
    const auto byte = bytes[i];
    if (strict && i == 0 && byte == 0x80) {
      throw Error(Errc::malformed_vlv, "non-canonical variable-length value", 0);
    }
    value = (value << 7) | (byte & 0x7F);
    if ((byte & 0x80) == 0) return {value, i + 1};
  }
  throw Error(Errc::malformed_vlv, "variable-length value longer than 4 bytes", kMaxVlvBytes - 1);
}

}  // namespace smfkit
