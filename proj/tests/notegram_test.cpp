#include "smfkit/notegram.hpp"

#include <gtest/gtest.h>

#include <regex>

#include "paper_vectors.hpp"
#include "smfkit/hex.hpp"

namespace smfkit {
namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Width of the rect whose title mentions `name`.
double width_of(const std::string& svg, const std::string& name) {
  const std::regex rect(R"re(<rect [^>]*width="([0-9.]+)"[^>]*><title>)re" + name + " ");
  std::smatch m;
  if (!std::regex_search(svg, m, rect)) return -1;
  return std::stod(m[1]);
}

std::vector<NoteSpan> poly_spans() {
  return to_note_spans(parse_event_stream(parse_hex_tokens(testing::kPolyphonic)), SpanMode::poly);
}

TEST(Notegram, PolyphonicRects) {
  const auto svg = render_notegram(poly_spans());
  EXPECT_NE(svg.find("<svg "), std::string::npos);
  EXPECT_EQ(count(svg, "<rect"), 6u);
  const double g4 = width_of(svg, "G4");
  ASSERT_GT(g4, 0) << svg;
  EXPECT_EQ(width_of(svg, "E4"), 2 * g4);
  EXPECT_EQ(width_of(svg, "C4"), 2 * g4);
  EXPECT_EQ(width_of(svg, "B4"), g4);
}

TEST(Notegram, SingleSpan) {
  const std::vector<NoteSpan> spans{{Channel(0), 60, 100, 0, 128}};
  const auto svg = render_notegram(spans);
  EXPECT_EQ(count(svg, "<rect"), 1u);
  EXPECT_EQ(width_of(svg, "C4"), 128);
}

TEST(Notegram, EmptyHasAxesOnly) {
  const auto svg = render_notegram({});
  EXPECT_EQ(count(svg, "<rect"), 0u);
  EXPECT_NE(svg.find("<line"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Notegram, ScaleAndDeterminism) {
  NotegramLayout layout;
  layout.ticks_per_unit = 3;
  const auto spans = poly_spans();
  const auto svg = render_notegram(spans, layout);
  EXPECT_EQ(svg, render_notegram(spans, layout));
  EXPECT_EQ(width_of(svg, "G4"), 42.667);
  layout.color_by = ColorBy::channel;
  EXPECT_NE(render_notegram(spans, layout), svg);
}

TEST(Notegram, RejectsZeroScale) {
  NotegramLayout layout;
  layout.pitch_row_height = 0;
  EXPECT_THROW(render_notegram({}, layout), Error);
}

}  // namespace
}  // namespace smfkit
