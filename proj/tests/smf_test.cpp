#include "smfkit/smf.hpp"

#include <gtest/gtest.h>

#include <random>

#include "paper_vectors.hpp"
#include "smfkit/hex.hpp"

namespace smfkit {
namespace {

Bytes wrap(const Bytes& stream, std::uint16_t format = 0, std::uint16_t ntracks = 1) {
  Bytes out = {'M', 'T', 'h', 'd', 0, 0, 0, 6, 0, static_cast<std::uint8_t>(format), 0,
               static_cast<std::uint8_t>(ntracks), 0x00, 0x80};
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  const auto n = static_cast<std::uint32_t>(stream.size());
  out.insert(out.end(), {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                         static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)});
  out.insert(out.end(), stream.begin(), stream.end());
  return out;
}

Errc error_of(const Bytes& bytes) {
  try {
    parse_smf(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parse_smf accepted the input";
  return Errc::syntax;
}

TEST(Smf, ParsesWrappedMonophonicStream) {
  const auto stream = parse_hex_tokens(testing::kMonophonic);
  const auto file = parse_smf(wrap(stream));
  EXPECT_EQ(file.format, 0);
  EXPECT_EQ(file.division_ppq, 128);
  ASSERT_EQ(file.tracks.size(), 1u);
  EXPECT_EQ(file.tracks[0], parse_event_stream(stream));
  EXPECT_EQ(write_smf(file), wrap(stream));
}

TEST(Smf, WriteAppendsEndOfTrack) {
  const SmfFile file{0, 128, {Track{}}};
  const auto bytes = write_smf(file);
  EXPECT_EQ(bytes, wrap(parse_hex_tokens("00 FF 2F 00")));

  const auto poly = parse_event_stream(parse_hex_tokens(testing::kPolyphonic));
  const auto written = parse_smf(write_smf({0, 128, {poly}}));
  ASSERT_TRUE(written.tracks[0].ends_with_end_of_track());
  EXPECT_EQ(written.tracks[0].events.size(), poly.events.size() + 1);
}

TEST(Smf, WriteRejectsInvalidFiles) {
  EXPECT_THROW(write_smf({0, 128, {Track{}, Track{}}}), Error);
  EXPECT_THROW(write_smf({3, 128, {Track{}}}), Error);
  EXPECT_THROW(write_smf({1, 0, {Track{}}}), Error);
  try {
    write_smf({1, 0x8000 | 25, {Track{}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::smpte_division);
  }
}

TEST(Smf, HeaderErrors) {
  const auto good = wrap(parse_hex_tokens("00 FF 2F 00"));
  EXPECT_EQ(error_of(parse_hex_tokens("00 FF 2F 00")), Errc::bad_magic);
  EXPECT_EQ(error_of(Bytes(good.begin(), good.begin() + 10)), Errc::truncated);

  auto bad_length = good;
  bad_length[7] = 7;
  EXPECT_EQ(error_of(bad_length), Errc::length_mismatch);

  auto smpte = good;
  smpte[12] = 0xE7;
  EXPECT_EQ(error_of(smpte), Errc::smpte_division);

  auto two_tracks = good;
  two_tracks.insert(two_tracks.end(), good.begin() + 14, good.end());
  EXPECT_EQ(error_of(two_tracks), Errc::invariant);
}

TEST(Smf, ChunkErrorsCarryAbsoluteOffsets) {
  auto file = wrap(parse_hex_tokens("00 90 3C 90 00 FF 2F 00"));
  try {
    parse_smf(file);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::malformed_data);
    EXPECT_EQ(e.offset(), 22u + 3u);
  }

  auto long_chunk = wrap(parse_hex_tokens("00 FF 2F 00"));
  long_chunk[21] = 9;
  EXPECT_EQ(error_of(long_chunk), Errc::truncated);

  auto padded = wrap(parse_hex_tokens("00 FF 2F 00 00 00"));
  EXPECT_EQ(error_of(padded), Errc::length_mismatch);
}

TEST(Smf, UnknownChunksAreSkippedWithWarning) {
  auto bytes = wrap(parse_hex_tokens("00 FF 2F 00"), 1, 1);
  const Bytes extra = {'X', 'F', 'I', 'H', 0, 0, 0, 2, 0xAA, 0xBB};
  bytes.insert(bytes.end(), extra.begin(), extra.end());
  Diagnostics warnings;
  const auto file = parse_smf(bytes, {}, &warnings);
  EXPECT_EQ(file.tracks.size(), 1u);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].message.find("XFIH"), std::string::npos);
  EXPECT_THROW(parse_smf(bytes, {true}), Error);
}

TEST(Smf, CheckReportsContainerAndTrackProblems) {
  EXPECT_TRUE(check_smf(wrap(parse_hex_tokens(testing::kMonophonic))).empty());
  const auto missing = check_smf(wrap(parse_hex_tokens(testing::kPolyphonic)));
  ASSERT_EQ(missing.size(), 1u);
  EXPECT_EQ(missing[0].severity, Severity::warning);
  EXPECT_EQ(missing[0].offset, 22u + 52u);

  const auto bad = check_smf(parse_hex_tokens("4D 54 68 64"));
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].severity, Severity::error);
}

TEST(Smf, Durations) {
  const auto file = parse_smf(wrap(parse_hex_tokens(testing::kMonophonic)));
  EXPECT_EQ(duration_ticks(file), 2048u);
  EXPECT_DOUBLE_EQ(duration_seconds(file), 8.0);

  // 2560 ticks at 120 bpm is 20 quarters of half a second.
  Track t;
  t.events = {{0, SetTempo{500000}}, {2560, EndOfTrack{}}};
  EXPECT_DOUBLE_EQ(duration_seconds({0, 128, {t}}), 10.0);

  // Tempo changes part way.
  Track changing;
  changing.events = {{0, SetTempo{1000000}}, {128, SetTempo{500000}}, {128, EndOfTrack{}}};
  EXPECT_DOUBLE_EQ(duration_seconds({0, 128, {changing}}), 1.5);
}

TEST(SmfProperty, WriteParseIdentity) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> byte(0, 127), count(0, 30), ntracks(1, 4), delta(0, 300);
  for (int round = 0; round < 300; ++round) {
    SmfFile file;
    file.format = static_cast<std::uint16_t>(round % 3);
    file.division_ppq = static_cast<std::uint16_t>(1 + byte(rng) * 100);
    const int n = file.format == 0 ? 1 : ntracks(rng);
    for (int k = 0; k < n; ++k) {
      Track t;
      for (int i = count(rng); i > 0; --i) {
        t.events.push_back({static_cast<Ticks>(delta(rng)),
                            NoteOn{Channel(static_cast<unsigned>(byte(rng) % 16)), static_cast<std::uint8_t>(byte(rng)),
                                   static_cast<std::uint8_t>(byte(rng))}});
      }
      t.events.push_back({static_cast<Ticks>(delta(rng)), EndOfTrack{}});
      file.tracks.push_back(std::move(t));
    }
    for (bool running : {false, true}) {
      ASSERT_EQ(parse_smf(write_smf(file, {running, NoteOffStyle::preserve})), file);
    }
  }
}

}  // namespace
}  // namespace smfkit
