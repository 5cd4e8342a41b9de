#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smfkit/message.hpp"
#include "smfkit/vlv.hpp"

namespace smfkit {

// One {delta-time, message} pair.
struct TrackEvent {
  Ticks delta = 0;
  Message message;
  bool operator==(const TrackEvent&) const = default;
};

// Ordered event list. If an EndOfTrack is present it must be the last event.
struct Track {
  std::vector<TrackEvent> events;

  bool ends_with_end_of_track() const;
  // Throws Errc::invariant if an EndOfTrack appears before the last event.
  void validate() const;

  bool operator==(const Track&) const = default;
};

using AbsTicks = std::uint64_t;

struct TimedMessage {
  AbsTicks tick = 0;
  Message message;
  bool operator==(const TimedMessage&) const = default;
};

// A sounding note reconstructed from on/off pairs: [on_tick, off_tick).
struct NoteSpan {
  Channel channel;
  std::uint8_t pitch = 0;
  std::uint8_t velocity = 0;
  AbsTicks on_tick = 0;
  AbsTicks off_tick = 0;
  bool operator==(const NoteSpan&) const = default;
};

enum class SpanMode { mono, poly };

enum class NoteOffStyle {
  preserve,  // write each message exactly as stored
  on0,       // NoteOff with release 0 is written as NoteOn velocity 0
  off,       // NoteOn velocity 0 is written as NoteOff release 0
};

struct ParseOptions {
  // Reject non-canonical VLVs and turn warnings into Errc::strict errors.
  bool strict = false;
};

struct SerializeOptions {
  bool use_running_status = false;
  NoteOffStyle noteoff_style = NoteOffStyle::preserve;
};

// Parses alternating VLV delta + message pairs until the input is exhausted
// or an EndOfTrack is read. Missing EndOfTrack and bytes after it are reported
// through `warnings`. Errors carry offsets into `bytes`.
Track parse_event_stream(ByteView bytes, const ParseOptions& options = {}, Diagnostics* warnings = nullptr);

// Lower-level form: decodes up to and including the first EndOfTrack without
// judging what follows. Throws on decode errors only.
struct StreamPrefix {
  Track track;
  std::size_t consumed = 0;
  bool terminated = false;  // an EndOfTrack was read
};
StreamPrefix parse_event_stream_prefix(ByteView bytes, const ParseOptions& options = {});

Bytes serialize_event_stream(const Track& track, const SerializeOptions& options = {});

// Running sum of deltas, order preserved.
std::vector<TimedMessage> absolute_timeline(const Track& track);

// Merges several timelines by tick; equal ticks keep the order of the inputs
// (first track first), then stream order.
std::vector<TimedMessage> merge_timelines(const std::vector<std::vector<TimedMessage>>& timelines);

// Pairs note-ons with their releases. Poly mode closes the earliest open
// note of the same channel and pitch; mono mode additionally closes any open
// note on a channel when a new note starts there. Notes still open at the end
// are closed at the last event tick and reported as warnings. Result sorted by
// (on_tick, pitch).
std::vector<NoteSpan> to_note_spans(const std::vector<TimedMessage>& timeline, SpanMode mode,
                                    Diagnostics* warnings = nullptr);
std::vector<NoteSpan> to_note_spans(const Track& track, SpanMode mode, Diagnostics* warnings = nullptr);

enum class Severity { warning, error };

struct Finding {
  Severity severity = Severity::warning;
  std::optional<std::size_t> offset;
  std::string message;

  std::string to_string() const;
};

// Validation pass for `check`: decodes as far as possible and reports the
// first decode error, a missing EndOfTrack, trailing bytes, and unmatched or
// unclosed notes. Offsets are shifted by `base_offset`.
std::vector<Finding> check_event_stream(ByteView bytes, std::size_t base_offset = 0);

}  // namespace smfkit
