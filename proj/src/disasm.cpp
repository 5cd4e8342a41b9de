#include <sstream>

#include "smfkit/hex.hpp"
#include "smfkit/score.hpp"

namespace smfkit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string channel_suffix(const Channel& ch) {
  return ch.index() == 0 ? std::string() : ", channel " + std::to_string(ch.number());
}

std::string note_words(std::uint8_t pitch) {
  return format_pitch_name(pitch_to_name(pitch)) + " note, pitch=" + std::to_string(pitch);
}

std::string bpm_text(std::uint32_t us) {
  if (us == 0) return "0";
  std::ostringstream os;
  os.precision(6);
  os << tempo_to_bpm(us);
  return os.str();
}

struct Line {
  std::string delta;
  std::string message;
  std::string note;
};

std::string render(const std::vector<Line>& lines) {
  std::size_t delta_width = 0;
  std::size_t message_width = 0;
  for (const auto& l : lines) {
    delta_width = std::max(delta_width, l.delta.size());
    message_width = std::max(message_width, std::min<std::size_t>(l.message.size(), 32));
  }
  std::string out;
  for (const auto& l : lines) {
    std::string row = l.delta;
    row.append(delta_width - l.delta.size() + 2, ' ');
    row += l.message;
    if (!l.note.empty()) {
      row.append(l.message.size() < message_width ? message_width - l.message.size() + 2 : 2, ' ');
      row += "(" + l.note + ")";
    }
    out += row + "\n";
  }
  return out;
}

std::string annotate(Ticks delta, const Message& m, std::uint32_t ppq) {
  auto text = describe_message(m);
  if (const auto name = plain_note_value_name(delta, ppq)) text += "; after " + *name;
  return text;
}

}  // namespace

std::string describe_message(const Message& message) {
  return std::visit(
      Overloaded{
          [](const NoteOn& n) {
            if (n.velocity == 0) {
              return "End of " + note_words(n.pitch) + ", note-on velocity 0" + channel_suffix(n.channel);
            }
            return "Start of " + note_words(n.pitch) + ", velocity=" + std::to_string(n.velocity) +
                   channel_suffix(n.channel);
          },
          [](const NoteOff& n) {
            auto text = "End of " + note_words(n.pitch);
            if (n.release) text += ", release=" + std::to_string(n.release);
            return text + channel_suffix(n.channel);
          },
          [](const ProgramChange& p) {
            return "Program change to " + std::to_string(p.program) + " on channel " +
                   std::to_string(p.channel.number());
          },
          [](const TimeSignature& t) {
            const auto den = t.denominator_pow2 < 31 ? std::to_string(1u << t.denominator_pow2)
                                                     : "2^" + std::to_string(t.denominator_pow2);
            return "Time signature " + std::to_string(t.numerator) + "/" + den + ", " +
                   std::to_string(t.clocks_per_click) + " clocks per click, " +
                   std::to_string(t.thirty_seconds_per_quarter) + " 32nds per quarter";
          },
          [](const KeySignature& k) { return "Key signature " + key_signature_name(k); },
          [](const SetTempo& t) {
            return "Tempo " + bpm_text(t.microseconds_per_quarter) + " bpm, " +
                   std::to_string(t.microseconds_per_quarter) + " us per quarter";
          },
          [](const EndOfTrack&) { return std::string("End of Track"); },
          [](const RawChannel& r) {
            std::string family;
            switch (r.status & 0xF0) {
              case status::kPolyPressure: family = "Polyphonic aftertouch"; break;
              case status::kControlChange: family = "Control change"; break;
              case status::kChannelPressure: family = "Channel pressure"; break;
              case status::kPitchBend: family = "Pitch bend"; break;
              default: family = "Channel message"; break;
            }
            return family + " on channel " + std::to_string((r.status & 0x0F) + 1);
          },
          [](const RawMeta& r) {
            static constexpr char kDigits[] = "0123456789ABCDEF";
            return std::string("Meta event 0x") + kDigits[r.type >> 4] + kDigits[r.type & 0x0F] + ", " +
                   std::to_string(r.payload.size()) + " bytes";
          },
          [](const SysEx& s) {
            return std::string(s.status == status::kSysEx ? "SysEx" : "SysEx escape") + ", " +
                   std::to_string(s.payload.size()) + " bytes";
          },
      },
      message);
}

std::string disassemble(const Track& track, std::uint32_t ppq) {
  std::vector<Line> lines;
  lines.reserve(track.events.size());
  for (const auto& e : track.events) {
    lines.push_back({format_hex(encode_vlv(e.delta).view()), format_hex(encode_message(e.message)),
                     annotate(e.delta, e.message, ppq)});
  }
  return render(lines);
}

std::string disassemble_bytes(ByteView bytes, std::uint32_t ppq) {
  std::vector<Line> lines;
  std::optional<std::uint8_t> running;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    try {
      const auto delta = decode_vlv(bytes.subspan(pos));
      const auto decoded = decode_message(bytes.subspan(pos + delta.consumed), running);
      running = decoded.running_status;
      lines.push_back({format_hex(bytes.subspan(pos, delta.consumed)),
                       format_hex(bytes.subspan(pos + delta.consumed, decoded.consumed)),
                       annotate(delta.value, decoded.message, ppq)});
      pos += delta.consumed + decoded.consumed;
      if (std::holds_alternative<EndOfTrack>(decoded.message) && pos < bytes.size()) {
        lines.push_back({"", format_hex(bytes.subspan(pos)), "Trailing bytes after End of Track"});
        break;
      }
    } catch (const Error& e) {
      lines.push_back({"", format_hex(bytes.subspan(pos)), std::string("Malformed: ") + e.detail()});
      break;
    }
  }
  return render(lines);
}

}  // namespace smfkit
