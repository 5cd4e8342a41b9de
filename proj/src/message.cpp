#include "smfkit/message.hpp"

#include <string>

#include "smfkit/vlv.hpp"

namespace smfkit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint8_t data_byte(unsigned value, const char* field) {
  if (value > 0x7F) {
    throw Error(Errc::range, std::string(field) + " " + std::to_string(value) + " exceeds 127");
  }
  return static_cast<std::uint8_t>(value);
}

std::string hex_byte(std::uint8_t b) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  return std::string("0x") + kDigits[b >> 4] + kDigits[b & 0x0F];
}

void append_meta(Bytes& out, std::uint8_t type, ByteView payload) {
  if (type > 0x7F) throw Error(Errc::range, "meta type " + hex_byte(type) + " exceeds 0x7F");
  if (payload.size() > kMaxVlv) throw Error(Errc::range, "meta payload too long");
  const auto length = encode_vlv(static_cast<Ticks>(payload.size()));
  out.push_back(status::kMeta);
  out.push_back(type);
  out.insert(out.end(), length.begin(), length.end());
  out.insert(out.end(), payload.begin(), payload.end());
}

Message decode_meta(std::uint8_t type, ByteView payload) {
  switch (type) {
    case meta::kEndOfTrack:
      if (payload.empty()) return EndOfTrack{};
      break;
    case meta::kSetTempo:
      if (payload.size() == 3) {
        return SetTempo{(std::uint32_t{payload[0]} << 16) | (std::uint32_t{payload[1]} << 8) | payload[2]};
      }
      break;
    case meta::kTimeSignature:
      if (payload.size() == 4) return TimeSignature{payload[0], payload[1], payload[2], payload[3]};
      break;
    case meta::kKeySignature:
      if (payload.size() == 2) {
        const auto sf = static_cast<std::int8_t>(payload[0]);
        if (sf >= -7 && sf <= 7 && payload[1] <= 1) return KeySignature{sf, payload[1]};
      }
      break;
    default:
      break;
  }
  return RawMeta{type, Bytes(payload.begin(), payload.end())};
}

}  // namespace

Channel::Channel(unsigned index) : index_(static_cast<std::uint8_t>(index)) {
  if (index > 15) throw Error(Errc::range, "channel index " + std::to_string(index) + " exceeds 15");
}

Channel Channel::from_number(int number) {
  if (number < 1 || number > 16) {
    throw Error(Errc::range, "channel " + std::to_string(number) + " outside 1..16");
  }
  return Channel(static_cast<unsigned>(number - 1));
}

std::optional<std::uint8_t> channel_status_of(const Message& m) {
  return std::visit(
      Overloaded{
          [](const NoteOn& n) -> std::optional<std::uint8_t> { return status::kNoteOn | n.channel.index(); },
          [](const NoteOff& n) -> std::optional<std::uint8_t> { return status::kNoteOff | n.channel.index(); },
          [](const ProgramChange& p) -> std::optional<std::uint8_t> {
            return status::kProgramChange | p.channel.index();
          },
          [](const RawChannel& r) -> std::optional<std::uint8_t> { return r.status; },
          [](const auto&) -> std::optional<std::uint8_t> { return std::nullopt; },
      },
      m);
}

DecodedMessage decode_message(ByteView bytes, std::optional<std::uint8_t> running_status, bool strict) {
  if (bytes.empty()) throw Error(Errc::truncated, "expected a message, input ended", 0);

  std::size_t pos = 0;
  std::uint8_t status_byte = bytes[0];
  bool used_running = false;
  if (!is_status_byte(status_byte)) {
    if (!running_status || !is_channel_status(*running_status)) {
      throw Error(Errc::orphan_data, "data byte " + hex_byte(status_byte) + " with no running status", 0);
    }
    status_byte = *running_status;
    used_running = true;
  } else {
    pos = 1;
  }

  if (is_channel_status(status_byte)) {
    const auto n = channel_data_length(status_byte);
    if (bytes.size() < pos + n) {
      throw Error(Errc::truncated, "channel message " + hex_byte(status_byte) + " is missing data bytes",
                  bytes.size());
    }
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (is_status_byte(bytes[i])) {
        throw Error(Errc::malformed_data,
                    "byte " + hex_byte(bytes[i]) + " has the top bit set where a data byte is required", i);
      }
    }
    const Channel ch(status_byte & 0x0F);
    const auto d0 = bytes[pos];
    const auto d1 = n > 1 ? bytes[pos + 1] : std::uint8_t{0};
    Message m;
    switch (status_byte & 0xF0) {
      case status::kNoteOn: m = NoteOn{ch, d0, d1}; break;
      case status::kNoteOff: m = NoteOff{ch, d0, d1}; break;
      case status::kProgramChange: m = ProgramChange{ch, d0}; break;
      default: m = RawChannel{status_byte, Bytes(bytes.begin() + pos, bytes.begin() + pos + n)}; break;
    }
    return {std::move(m), pos + n, used_running, status_byte};
  }

  if (status_byte == status::kMeta) {
    if (bytes.size() < 2) throw Error(Errc::truncated, "meta event is missing its type byte", bytes.size());
    const auto type = bytes[1];
    if (is_status_byte(type)) {
      throw Error(Errc::malformed_data, "meta type " + hex_byte(type) + " has the top bit set", 1);
    }
    VlvDecoded len;
    try {
      len = decode_vlv(bytes.subspan(2), strict);
    } catch (const Error& e) {
      throw e.rebased(2);
    }
    const auto start = 2 + len.consumed;
    if (bytes.size() - start < len.value) {
      throw Error(Errc::truncated,
                  "meta event declares " + std::to_string(len.value) + " payload bytes, " +
                      std::to_string(bytes.size() - start) + " remain",
                  bytes.size());
    }
    return {decode_meta(type, bytes.subspan(start, len.value)), start + len.value, false, std::nullopt};
  }

  if (status_byte == status::kSysEx || status_byte == status::kSysExEscape) {
    VlvDecoded len;
    try {
      len = decode_vlv(bytes.subspan(1), strict);
    } catch (const Error& e) {
      throw e.rebased(1);
    }
    const auto start = 1 + len.consumed;
    if (bytes.size() - start < len.value) {
      throw Error(Errc::truncated, "SysEx block declares " + std::to_string(len.value) + " bytes", bytes.size());
    }
    auto payload = bytes.subspan(start, len.value);
    return {SysEx{status_byte, Bytes(payload.begin(), payload.end())}, start + len.value, false, std::nullopt};
  }

  throw Error(Errc::unsupported_status, "status " + hex_byte(status_byte) + " cannot appear in a track", 0);
}

void append_message(Bytes& out, const Message& m) {
  std::visit(
      Overloaded{
          [&](const NoteOn& n) {
            const auto p = data_byte(n.pitch, "pitch");
            const auto v = data_byte(n.velocity, "velocity");
            out.insert(out.end(), {static_cast<std::uint8_t>(status::kNoteOn | n.channel.index()), p, v});
          },
          [&](const NoteOff& n) {
            const auto p = data_byte(n.pitch, "pitch");
            const auto r = data_byte(n.release, "release velocity");
            out.insert(out.end(), {static_cast<std::uint8_t>(status::kNoteOff | n.channel.index()), p, r});
          },
          [&](const ProgramChange& pc) {
            const auto p = data_byte(pc.program, "program");
            out.insert(out.end(), {static_cast<std::uint8_t>(status::kProgramChange | pc.channel.index()), p});
          },
          [&](const TimeSignature& t) {
            const std::uint8_t payload[] = {t.numerator, t.denominator_pow2, t.clocks_per_click,
                                            t.thirty_seconds_per_quarter};
            append_meta(out, meta::kTimeSignature, payload);
          },
          [&](const KeySignature& k) {
            if (k.sharps_flats < -7 || k.sharps_flats > 7) {
              throw Error(Errc::range, "key signature accidentals " + std::to_string(k.sharps_flats) +
                                           " outside -7..7");
            }
            if (k.mode > 1) throw Error(Errc::range, "key signature mode must be 0 or 1");
            const std::uint8_t payload[] = {static_cast<std::uint8_t>(k.sharps_flats), k.mode};
            append_meta(out, meta::kKeySignature, payload);
          },
          [&](const SetTempo& t) {
            if (t.microseconds_per_quarter > 0xFFFFFF) {
              throw Error(Errc::range, "tempo " + std::to_string(t.microseconds_per_quarter) +
                                           " us/quarter does not fit in 24 bits");
            }
            const auto us = t.microseconds_per_quarter;
            const std::uint8_t payload[] = {static_cast<std::uint8_t>(us >> 16), static_cast<std::uint8_t>(us >> 8),
                                            static_cast<std::uint8_t>(us)};
            append_meta(out, meta::kSetTempo, payload);
          },
          [&](const EndOfTrack&) { append_meta(out, meta::kEndOfTrack, {}); },
          [&](const RawChannel& r) {
            if (!is_channel_status(r.status)) {
              throw Error(Errc::range, "raw channel status " + hex_byte(r.status) + " is not a channel status");
            }
            if (r.data.size() != channel_data_length(r.status)) {
              throw Error(Errc::range, "raw channel message " + hex_byte(r.status) + " needs " +
                                           std::to_string(channel_data_length(r.status)) + " data bytes");
            }
            out.push_back(r.status);
            for (auto b : r.data) out.push_back(data_byte(b, "data byte"));
          },
          [&](const RawMeta& r) { append_meta(out, r.type, r.payload); },
          [&](const SysEx& s) {
            if (s.status != status::kSysEx && s.status != status::kSysExEscape) {
              throw Error(Errc::range, "SysEx status must be F0 or F7");
            }
            if (s.payload.size() > kMaxVlv) throw Error(Errc::range, "SysEx payload too long");
            out.push_back(s.status);
            append_vlv(out, static_cast<Ticks>(s.payload.size()));
            out.insert(out.end(), s.payload.begin(), s.payload.end());
          },
      },
      m);
}

Bytes encode_message(const Message& m) {
  Bytes out;
  append_message(out, m);
  return out;
}

Message normalize_note_off(const Message& m) {
  if (const auto* on = std::get_if<NoteOn>(&m); on && on->velocity == 0) {
    return NoteOff{on->channel, on->pitch, 0};
  }
  return m;
}

bool is_sounding_note_on(const Message& m) {
  const auto* on = std::get_if<NoteOn>(&m);
  return on && on->velocity > 0;
}

bool is_note_release(const Message& m) {
  if (std::holds_alternative<NoteOff>(m)) return true;
  const auto* on = std::get_if<NoteOn>(&m);
  return on && on->velocity == 0;
}

}  // namespace smfkit
