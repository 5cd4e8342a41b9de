#include "smfkit/hex.hpp"

#include <cctype>

namespace smfkit {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool is_separator(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}' || c == ',';
}

}  // namespace

Bytes parse_hex_tokens(std::string_view text) {
  Bytes out;
  std::size_t line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  auto column = [&](std::size_t pos) { return pos - line_start + 1; };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (is_separator(c)) {
      ++i;
      continue;
    }
    if (c == ';' || c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '(') {
      const auto open_line = line;
      const auto open_col = column(i);
      while (i < text.size() && text[i] != ')') {
        if (text[i] == '\n') {
          ++line;
          line_start = i + 1;
        }
        ++i;
      }
      if (i == text.size()) {
        throw SyntaxError(Errc::syntax, "unterminated '(' comment", open_line, open_col);
      }
      ++i;
      continue;
    }

    const auto token_start = i;
    while (i < text.size() && !is_separator(text[i]) && text[i] != '(' && text[i] != ';' &&
           text[i] != '#') {
      ++i;
    }
    auto token = text.substr(token_start, i - token_start);
    if (token.size() > 2 && token[0] == '0' && (token[1] == 'x' || token[1] == 'X')) {
      token.remove_prefix(2);
    }
    if (token.empty() || token.size() > 2) {
      throw SyntaxError(Errc::syntax, "expected a hex byte, got '" + std::string(token) + "'", line,
                        column(token_start));
    }
    int value = 0;
    for (char d : token) {
      const int v = hex_value(d);
      if (v < 0) {
        throw SyntaxError(Errc::syntax, "invalid hex digit '" + std::string(1, d) + "'", line,
                          column(token_start));
      }
      value = value * 16 + v;
    }
    out.push_back(static_cast<std::uint8_t>(value));
  }
  return out;
}

std::string format_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(bytes.size() * 3);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back(kDigits[bytes[i] >> 4]);
    out.push_back(kDigits[bytes[i] & 0x0F]);
  }
  return out;
}

}  // namespace smfkit
