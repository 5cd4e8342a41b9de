#include "smfkit/score.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "paper_vectors.hpp"
#include "smfkit/hex.hpp"

namespace smfkit {
namespace {

Bytes strip_end_of_track(Bytes b) {
  const Bytes eot = {0x00, 0xFF, 0x2F, 0x00};
  if (b.size() >= 4 && std::equal(eot.begin(), eot.end(), b.end() - 4)) b.resize(b.size() - 4);
  return b;
}

constexpr const char* kTwinkle = R"(ppq 128
timesig 4/4 48 8
keysig 0 major
voice ch1:
  C4 1/4 v40   C4 1/4 v30   G4 1/4 v45   G4 1/4 v50
  A4 1/4 v45   A4 1/4 v50   G4 1/2 v35
  F4 1/4 v50   F4 1/4 v45
  E4 1/8 v50 R 1/8   E4 1/8 v40 R 1/8
  D4 1/8 v45 R 1/8   D4 1/8 v50 R 1/8
  C4 1/2 v30
)";

constexpr const char* kTwoVoices = R"(noteoff off
voice ch1:
  E4 1/2
  C4 1/2 r64
voice ch1:
  G4 1/4 A4 1/4 | B4 1/4 C5 1/4
)";

constexpr const char* kThreeInstruments = R"(voice ch1 program 65:
  C5 1/4 v64  D5 1/4 v64  E5 1/4 v64  G5 1/4 v64
voice ch2 program 0:
  C4+G4+E5 1/1 v64
voice ch10 program 0:
  B1 1/4 v64  R 1/4  B1 1/4 v64
)";

SyntaxError syntax_error(const char* text) {
  try {
    parse_score(text);
  } catch (const SyntaxError& e) {
    return e;
  }
  ADD_FAILURE() << "accepted: " << text;
  return SyntaxError(Errc::syntax, "", 0, 0);
}

TEST(ScoreParse, MinimalScore) {
  const auto s = parse_score("ppq 128\nvoice ch1:\nC4 1/4 ppp");
  EXPECT_EQ(s.ppq, 128u);
  ASSERT_EQ(s.voices.size(), 1u);
  EXPECT_EQ(s.voices[0].channel, Channel(0));
  ASSERT_EQ(s.voices[0].items.size(), 1u);
  const auto& note = std::get<NoteItem>(s.voices[0].items[0]);
  EXPECT_EQ(note.pitches, std::vector<std::uint8_t>{60});
  EXPECT_EQ(note.value, NoteValue(1, 4));
  EXPECT_EQ(dynamic_to_velocity(std::get<DynamicMark>(note.loudness)), 20);
}

TEST(ScoreParse, Directives) {
  const auto s = parse_score(
      "# header\nppq 96\ntempo 90.5\ntimesig 6/8\nkeysig -3 minor\nnoteoff off\nvoice ch10 program 0: B1 1/4 # kick\n");
  EXPECT_EQ(s.ppq, 96u);
  EXPECT_DOUBLE_EQ(*s.tempo_bpm, 90.5);
  EXPECT_EQ(*s.time_signature, (TimeSignature{6, 3, 24, 8}));
  EXPECT_EQ(*s.key_signature, (KeySignature{-3, 1}));
  EXPECT_EQ(s.noteoff_style, NoteOffStyle::off);
  ASSERT_EQ(s.bindings.size(), 1u);
  EXPECT_EQ(s.bindings[0].channel, Channel(9));
  EXPECT_EQ(s.voices[0].items.size(), 1u);
}

TEST(ScoreParse, ChordsRestsAndModifiers) {
  const auto s = parse_score("voice ch2:\n C4+E4+G4 3/8 ff r10  R 1/8  C#4 1 v99");
  const auto& items = s.voices[0].items;
  ASSERT_EQ(items.size(), 3u);
  const auto& chord = std::get<NoteItem>(items[0]);
  EXPECT_EQ(chord.pitches, (std::vector<std::uint8_t>{60, 64, 67}));
  EXPECT_EQ(chord.value, NoteValue(3, 8));
  EXPECT_EQ(std::get<DynamicMark>(chord.loudness), DynamicMark::ff);
  EXPECT_EQ(chord.release, 10);
  EXPECT_EQ(std::get<RestItem>(items[1]).value, NoteValue(1, 8));
  const auto& single = std::get<NoteItem>(items[2]);
  EXPECT_EQ(single.value, NoteValue(1, 1));
  EXPECT_EQ(std::get<std::uint8_t>(single.loudness), 99);
}

TEST(ScoreParse, Errors) {
  EXPECT_NE(std::string(syntax_error("").what()).find("no voices"), std::string::npos);

  const auto channel = syntax_error("voice ch17:");
  EXPECT_EQ(channel.code(), Errc::range);
  EXPECT_EQ(channel.line(), 1u);
  EXPECT_EQ(channel.column(), 9u);

  const auto pitch = syntax_error("voice ch1:\n  C4 1/4 H4 1/4");
  EXPECT_EQ(pitch.line(), 2u);
  EXPECT_EQ(pitch.column(), 10u);

  EXPECT_EQ(syntax_error("voice ch1:\nC4 1/0").code(), Errc::range);
  EXPECT_EQ(syntax_error("voice ch1:\nC4 x/4").code(), Errc::syntax);
  EXPECT_EQ(syntax_error("voice ch1:\nC4+C4 1/4").code(), Errc::syntax);
  EXPECT_EQ(syntax_error("voice ch1:\nvoice ch2:\nC4 1/4").line(), 1u);
  EXPECT_EQ(syntax_error("C4 1/4").code(), Errc::syntax);
  EXPECT_EQ(syntax_error("voice ch1\nC4 1/4").code(), Errc::syntax);
  EXPECT_EQ(syntax_error("timesig 3/5\nvoice ch1: C4 1/4").code(), Errc::range);
  EXPECT_EQ(syntax_error("voice ch1: C4 1/4 v0").code(), Errc::range);
  EXPECT_EQ(syntax_error("voice ch1: C4 1/4 mf v3").code(), Errc::syntax);
  EXPECT_EQ(syntax_error("voice ch1 program 1: C4 1/4\nvoice ch1 program 2: D4 1/4").code(), Errc::syntax);
  EXPECT_EQ(syntax_error("ppq 0\nvoice ch1: C4 1/4").code(), Errc::range);
  EXPECT_EQ(syntax_error("tempo 1\nvoice ch1: C4 1/4").code(), Errc::range);
}

TEST(Assemble, MonophonicListing) {
  const auto file = assemble(parse_score(kTwinkle));
  EXPECT_EQ(file.format, 0);
  EXPECT_EQ(file.division_ppq, 128);
  EXPECT_EQ(serialize_event_stream(file.tracks[0]), parse_hex_tokens(testing::kMonophonic));
}

TEST(Assemble, PolyphonicListing) {
  const auto track = assemble_track(parse_score(kTwoVoices));
  EXPECT_EQ(strip_end_of_track(serialize_event_stream(track)), parse_hex_tokens(testing::kPolyphonic));
}

TEST(Assemble, MultiInstrumentListing) {
  const auto track = assemble_track(parse_score(kThreeInstruments));
  EXPECT_EQ(strip_end_of_track(serialize_event_stream(track)), parse_hex_tokens(testing::kMultiInstrument));
}

TEST(Assemble, LeadingEventsAndEndOfTrack) {
  const auto track = assemble_track(parse_score("tempo 60\ntimesig 3/4\nvoice ch3 program 5: C4 1/4 R 1/2"));
  ASSERT_EQ(track.events.size(), 6u);
  EXPECT_EQ(track.events[0].message, Message(TimeSignature{3, 2, 24, 8}));
  EXPECT_EQ(track.events[1].message, Message(SetTempo{1000000}));
  EXPECT_EQ(track.events[2].message, Message(ProgramChange{Channel(2), 5}));
  // The trailing rest keeps the track open until tick 384.
  EXPECT_EQ(track.events[5], (TrackEvent{256, EndOfTrack{}}));
}

TEST(Assemble, NoteOffStyleOverride) {
  AssembleOptions options;
  options.noteoff_style = NoteOffStyle::off;
  const auto track = assemble_track(parse_score("voice ch1: C4 1/4"), options);
  EXPECT_EQ(track.events[1].message, Message(NoteOff{Channel(0), 60, 0}));
}

TEST(Assemble, CustomDynamics) {
  AssembleOptions options;
  options.dynamics.velocities[static_cast<std::size_t>(DynamicMark::p)] = 33;
  const auto track = assemble_track(parse_score("voice ch1: C4 1/4 p"), options);
  EXPECT_EQ(track.events[0].message, Message(NoteOn{Channel(0), 60, 33}));
}

TEST(Assemble, RejectsOverlapsAndZeroLengthNotes) {
  try {
    assemble(parse_score("voice ch1: C4 1/2\nvoice ch1: R 1/4 C4 1/4"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invariant);
  }
  // Different channels may share a pitch.
  EXPECT_NO_THROW(assemble(parse_score("voice ch1: C4 1/2\nvoice ch2: C4 1/4")));
  EXPECT_THROW(assemble(parse_score("ppq 1\nvoice ch1: C4 1/16")), Error);
}

TEST(Assemble, IsDeterministic) {
  EXPECT_EQ(write_smf(assemble(parse_score(kThreeInstruments))), write_smf(assemble(parse_score(kThreeInstruments))));
}

// Spans straight from item arithmetic: accumulate exact durations per voice.
std::vector<NoteSpan> spans_from_items(const Score& score, const DynamicsTable& table = {}) {
  std::vector<NoteSpan> spans;
  for (const auto& voice : score.voices) {
    std::uint64_t num = 0;  // running position in whole notes, as num/den
    std::uint64_t den = 1;
    auto ticks_at = [&](std::uint64_t n, std::uint64_t d) { return n * 4 * score.ppq / d; };
    for (const auto& item : voice.items) {
      const auto& value = std::holds_alternative<RestItem>(item) ? std::get<RestItem>(item).value
                                                                 : std::get<NoteItem>(item).value;
      const auto next_num = num * value.denominator() + value.numerator() * den;
      const auto next_den = den * value.denominator();
      if (const auto* note = std::get_if<NoteItem>(&item)) {
        const auto velocity = std::holds_alternative<DynamicMark>(note->loudness)
                                  ? table.velocity(std::get<DynamicMark>(note->loudness))
                                  : std::get<std::uint8_t>(note->loudness);
        for (auto p : note->pitches) {
          spans.push_back({voice.channel, p, velocity, ticks_at(num, den), ticks_at(next_num, next_den)});
        }
      }
      const auto g = std::gcd(next_num, next_den);
      num = next_num / g;
      den = next_den / g;
    }
  }
  std::sort(spans.begin(), spans.end(), [](const NoteSpan& a, const NoteSpan& b) {
    return std::tie(a.on_tick, a.pitch, a.channel, a.off_tick) < std::tie(b.on_tick, b.pitch, b.channel, b.off_tick);
  });
  return spans;
}

// Random scores whose durations are multiples of 1/16 at ppq 128 (exact ticks).
std::string random_score(std::mt19937& rng) {
  std::uniform_int_distribution<int> voices(1, 3), items(1, 8), sixteenths(1, 8), pitch(48, 72), kind(0, 4),
      vel(1, 127), channel(1, 4);
  std::ostringstream os;
  os << "ppq 128\n";
  const int nv = voices(rng);
  for (int v = 0; v < nv; ++v) {
    // One channel per voice keeps same-pitch notes from colliding.
    os << "voice ch" << (v * 4 + channel(rng)) << ":\n";
    const int ni = items(rng);
    for (int i = 0; i < ni; ++i) {
      const int k = kind(rng);
      if (k == 0) {
        os << "  R " << sixteenths(rng) << "/16\n";
        continue;
      }
      const int p = pitch(rng);
      os << "  " << format_pitch_name(pitch_to_name(static_cast<std::uint8_t>(p)));
      if (k == 4) os << "+" << format_pitch_name(pitch_to_name(static_cast<std::uint8_t>(p + 7)));
      os << " " << sixteenths(rng) << "/16 v" << vel(rng) << "\n";
    }
    os << "  C0 1/16\n";  // every voice ends with a note
  }
  return os.str();
}

TEST(AssembleProperty, SpansMatchItemArithmetic) {
  std::mt19937 rng(23);
  for (int round = 0; round < 300; ++round) {
    const auto text = random_score(rng);
    const auto score = parse_score(text);
    const auto spans = to_note_spans(assemble_track(score), SpanMode::poly);
    ASSERT_EQ(spans, spans_from_items(score)) << text;
  }
}

TEST(AssembleProperty, PaperScoresMatchItemArithmetic) {
  for (const char* text : {kTwinkle, kTwoVoices, kThreeInstruments}) {
    const auto score = parse_score(text);
    EXPECT_EQ(to_note_spans(assemble_track(score), SpanMode::poly), spans_from_items(score));
  }
}

TEST(ToScore, ReassemblesToSameSpans) {
  for (const char* text : {kTwinkle, kTwoVoices, kThreeInstruments}) {
    const auto file = assemble(parse_score(text));
    const auto rebuilt = assemble(parse_score(to_score(file)));
    EXPECT_EQ(to_note_spans(rebuilt.tracks[0], SpanMode::poly), to_note_spans(file.tracks[0], SpanMode::poly));
  }
}

TEST(ToScore, PolyphonicFileGetsTwoVoices) {
  const SmfFile file{0, 128, {parse_event_stream(parse_hex_tokens(testing::kPolyphonic))}};
  const auto text = to_score(file);
  const auto score = parse_score(text);
  EXPECT_EQ(score.voices.size(), 2u);
  EXPECT_EQ(score.noteoff_style, NoteOffStyle::off);
  EXPECT_EQ(to_note_spans(assemble_track(score), SpanMode::poly), to_note_spans(file.tracks[0], SpanMode::poly));
}

TEST(ToScore, KeepsChordsAndPrograms) {
  const auto text = to_score(assemble(parse_score(kThreeInstruments)));
  EXPECT_NE(text.find("C4+G4+E5 1/1 v64"), std::string::npos) << text;
  EXPECT_NE(text.find("voice ch1 program 65:"), std::string::npos) << text;
  EXPECT_NE(text.find("voice ch10 program 0:"), std::string::npos) << text;
}

TEST(ToScore, EmptyFileNotesTheError) {
  Track only_end;
  only_end.events = {{0, EndOfTrack{}}};
  const auto text = to_score({0, 128, {only_end}});
  EXPECT_NE(text.find("# error: no voices"), std::string::npos);
  EXPECT_THROW(parse_score(text), SyntaxError);
}

TEST(ToScoreProperty, RandomScoresRoundTrip) {
  std::mt19937 rng(29);
  for (int round = 0; round < 200; ++round) {
    const auto file = assemble(parse_score(random_score(rng)));
    const auto text = to_score(file);
    const auto rebuilt = assemble(parse_score(text));
    ASSERT_EQ(to_note_spans(rebuilt.tracks[0], SpanMode::poly), to_note_spans(file.tracks[0], SpanMode::poly))
        << text;
  }
}

}  // namespace
}  // namespace smfkit
