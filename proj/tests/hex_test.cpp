#include "smfkit/hex.hpp"

#include <gtest/gtest.h>

namespace smfkit {
namespace {

TEST(Hex, ReadsPlainListing) {
  EXPECT_EQ(parse_hex_tokens("00 90 3c 28\n81 00 90 3C 00"),
            (Bytes{0x00, 0x90, 0x3C, 0x28, 0x81, 0x00, 0x90, 0x3C, 0x00}));
}

TEST(Hex, SkipsBracesCommentsAndPrefixes) {
  const auto text = "{00 FF 2F 00} (End of Track)\n0x90, 0x3c ; trailing note\n# whole line\n f";
  EXPECT_EQ(parse_hex_tokens(text), (Bytes{0x00, 0xFF, 0x2F, 0x00, 0x90, 0x3C, 0x0F}));
}

TEST(Hex, ReportsLineAndColumn) {
  try {
    parse_hex_tokens("00 90\n3C zz");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 4u);
  }
  EXPECT_THROW(parse_hex_tokens("123"), SyntaxError);
  EXPECT_THROW(parse_hex_tokens("00 (open"), SyntaxError);
}

TEST(Hex, FormatsUppercase) {
  EXPECT_EQ(format_hex(Bytes{0x0f, 0x42, 0x40}), "0F 42 40");
  EXPECT_EQ(format_hex(Bytes{}), "");
}

}  // namespace
}  // namespace smfkit
