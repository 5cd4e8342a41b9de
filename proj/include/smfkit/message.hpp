#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>

#include "smfkit/error.hpp"

namespace smfkit {

// MIDI channel, stored as the 0..15 value of the status byte's low nibble.
// Users count channels 1..16; see from_number().
class Channel {
 public:
  constexpr Channel() = default;
  explicit Channel(unsigned index);

  static Channel from_number(int number);

  constexpr std::uint8_t index() const noexcept { return index_; }
  constexpr int number() const noexcept { return index_ + 1; }

  auto operator<=>(const Channel&) const = default;

 private:
  std::uint8_t index_ = 0;
};

namespace status {
inline constexpr std::uint8_t kNoteOff = 0x80;
inline constexpr std::uint8_t kNoteOn = 0x90;
inline constexpr std::uint8_t kPolyPressure = 0xA0;
inline constexpr std::uint8_t kControlChange = 0xB0;
inline constexpr std::uint8_t kProgramChange = 0xC0;
inline constexpr std::uint8_t kChannelPressure = 0xD0;
inline constexpr std::uint8_t kPitchBend = 0xE0;
inline constexpr std::uint8_t kSysEx = 0xF0;
inline constexpr std::uint8_t kSysExEscape = 0xF7;
inline constexpr std::uint8_t kMeta = 0xFF;
}  // namespace status

namespace meta {
inline constexpr std::uint8_t kEndOfTrack = 0x2F;
inline constexpr std::uint8_t kSetTempo = 0x51;
inline constexpr std::uint8_t kTimeSignature = 0x58;
inline constexpr std::uint8_t kKeySignature = 0x59;
}  // namespace meta

struct NoteOn {
  Channel channel;
  std::uint8_t pitch = 0;
  std::uint8_t velocity = 0;
  bool operator==(const NoteOn&) const = default;
};

struct NoteOff {
  Channel channel;
  std::uint8_t pitch = 0;
  std::uint8_t release = 0;
  bool operator==(const NoteOff&) const = default;
};

struct ProgramChange {
  Channel channel;
  std::uint8_t program = 0;
  bool operator==(const ProgramChange&) const = default;
};

// FF 58 04 nn dd cc bb. The denominator is 2^denominator_pow2.
struct TimeSignature {
  std::uint8_t numerator = 4;
  std::uint8_t denominator_pow2 = 2;
  std::uint8_t clocks_per_click = 24;
  std::uint8_t thirty_seconds_per_quarter = 8;
  bool operator==(const TimeSignature&) const = default;
};

// FF 59 02 sf mi. sharps_flats < 0 counts flats; mode 0 major, 1 minor.
struct KeySignature {
  std::int8_t sharps_flats = 0;
  std::uint8_t mode = 0;
  bool operator==(const KeySignature&) const = default;
};

// FF 51 03 tt tt tt.
struct SetTempo {
  std::uint32_t microseconds_per_quarter = 500000;
  bool operator==(const SetTempo&) const = default;
};

struct EndOfTrack {
  bool operator==(const EndOfTrack&) const = default;
};

// Channel message this library does not interpret (aftertouch, controllers,
// pitch bend). `data` holds exactly the family's data bytes.
struct RawChannel {
  std::uint8_t status = 0;
  Bytes data;
  bool operator==(const RawChannel&) const = default;
};

struct RawMeta {
  std::uint8_t type = 0;
  Bytes payload;
  bool operator==(const RawMeta&) const = default;
};

// F0 or F7 block, payload kept opaque.
struct SysEx {
  std::uint8_t status = status::kSysEx;
  Bytes payload;
  bool operator==(const SysEx&) const = default;
};

using Message = std::variant<NoteOn, NoteOff, ProgramChange, TimeSignature, KeySignature, SetTempo,
                             EndOfTrack, RawChannel, RawMeta, SysEx>;

constexpr bool is_status_byte(std::uint8_t b) noexcept { return (b & 0x80) != 0; }

// Number of data bytes that follow a channel status byte; 0 for non-channel
// statuses.
constexpr std::size_t channel_data_length(std::uint8_t status_byte) noexcept {
  switch (status_byte & 0xF0) {
    case status::kNoteOff:
    case status::kNoteOn:
    case status::kPolyPressure:
    case status::kControlChange:
    case status::kPitchBend:
      return 2;
    case status::kProgramChange:
    case status::kChannelPressure:
      return 1;
    default:
      return 0;
  }
}

constexpr bool is_channel_status(std::uint8_t b) noexcept { return b >= 0x80 && b < 0xF0; }

// Status byte a channel message is written with; nullopt for meta and SysEx.
std::optional<std::uint8_t> channel_status_of(const Message& m);

struct DecodedMessage {
  Message message;
  std::size_t consumed = 0;
  bool used_running_status = false;
  // Running status in effect after this message: the channel status, or
  // nullopt after meta/SysEx events, which cancel it.
  std::optional<std::uint8_t> running_status;
};

// Decodes one message from the front of `bytes`. A leading data byte reuses
// `running_status`. Throws Error with offsets relative to `bytes`.
DecodedMessage decode_message(ByteView bytes, std::optional<std::uint8_t> running_status = std::nullopt,
                              bool strict = false);

// Canonical encoding with an explicit status byte. Throws Errc::range when a
// field is out of its domain.
Bytes encode_message(const Message& m);
void append_message(Bytes& out, const Message& m);

// Note-on with velocity 0 becomes NoteOff with release 0; anything else is
// returned unchanged.
Message normalize_note_off(const Message& m);

// NoteOn with velocity > 0.
bool is_sounding_note_on(const Message& m);
// NoteOff, or NoteOn with velocity 0.
bool is_note_release(const Message& m);

}  // namespace smfkit
