#pragma once

#include <string>
#include <string_view>

#include "smfkit/error.hpp"

namespace smfkit {

// Reads a headerless hex listing: whitespace-separated byte tokens of one or
// two hex digits, case-insensitive, optional 0x prefix. Braces and commas act
// as separators, `( ... )` groups and `;`/`#` line tails are comments, so an
// annotated listing reads back to its bytes. Throws SyntaxError on a bad token.
Bytes parse_hex_tokens(std::string_view text);

// "90 3C 28": uppercase, single spaces.
std::string format_hex(ByteView bytes);

}  // namespace smfkit
