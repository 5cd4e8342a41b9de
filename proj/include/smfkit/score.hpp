#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smfkit/smf.hpp"
#include "smfkit/theory.hpp"

namespace smfkit {

// Velocity source for a note: a dynamic mark resolved through a
// DynamicsTable, or an explicit velocity 1..127.
using Loudness = std::variant<DynamicMark, std::uint8_t>;

struct NoteItem {
  std::vector<std::uint8_t> pitches;  // one or more, distinct
  NoteValue value;
  Loudness loudness = DynamicMark::mf;
  std::uint8_t release = 0;  // only written with NoteOffStyle::off
};

struct RestItem {
  NoteValue value;
};

using VoiceItem = std::variant<NoteItem, RestItem>;

struct Voice {
  Channel channel;
  std::vector<VoiceItem> items;
};

struct ProgramBinding {
  Channel channel;
  std::uint8_t program = 0;
};

// A parsed score document.
//
// Text grammar, one directive per line, `#` starts a comment:
//
//   ppq N                      ticks per quarter note (default 128)
//   tempo BPM                  emits FF 51
//   timesig N/M [CC [BB]]      emits FF 58; CC defaults to 24, BB to 8
//   keysig N [major|minor]     emits FF 59; N < 0 counts flats
//   noteoff on0|off            how note ends are written (default on0)
//   voice chK [program P]:     starts a voice on channel K (1..16)
//
// Inside a voice, items follow on the same or later lines:
//
//   PITCH[+PITCH...] p/q [dynamic|vNN] [rNN]    note or chord
//   R p/q                                        rest
//
// Pitches use C4 = 60 with optional # or b. `|` may be used as a bar line
// and is ignored.
struct Score {
  std::uint32_t ppq = kDefaultPpq;
  std::optional<double> tempo_bpm;
  std::optional<TimeSignature> time_signature;
  std::optional<KeySignature> key_signature;
  NoteOffStyle noteoff_style = NoteOffStyle::on0;
  std::vector<ProgramBinding> bindings;
  std::vector<Voice> voices;
};

// Throws SyntaxError with 1-based line/column.
Score parse_score(std::string_view text);

struct AssembleOptions {
  DynamicsTable dynamics;
  // Overrides the score's `noteoff` directive when set.
  std::optional<NoteOffStyle> noteoff_style;
};

// Builds one format-0 track: leading meta events, one program change per
// binding, then every voice's notes merged by tick, then End of Track at the
// end of the longest voice. At a shared tick note ends come before note
// starts; later-started notes end first, otherwise declaration order holds.
// Throws Errc::invariant for overlapping same-channel same-pitch notes or
// notes shorter than one tick.
Track assemble_track(const Score& score, const AssembleOptions& options = {});
SmfFile assemble(const Score& score, const AssembleOptions& options = {});

// Best-effort inverse of assemble(): one voice per channel, extra voices
// where a channel is polyphonic, notes sharing start, end and velocity
// grouped into chords. Re-assembling the text reproduces the note spans.
std::string to_score(const SmfFile& file);

// One line per event: delta bytes, message bytes, and a parenthesised
// annotation. Stripping annotations with parse_hex_tokens gives back the
// serialized track.
std::string disassemble(const Track& track, std::uint32_t ppq = kDefaultPpq);

// Like disassemble() but decodes raw stream bytes itself; a malformed tail is
// printed as a final annotated line instead of failing.
std::string disassemble_bytes(ByteView bytes, std::uint32_t ppq = kDefaultPpq);

// Annotation text for a single message ("Start of E4 note, pitch=64, ...").
std::string describe_message(const Message& message);

}  // namespace smfkit
