#include "smfkit/track.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

#include "smfkit/theory.hpp"

namespace smfkit {
namespace {

struct StreamResult {
  Track track;
  std::optional<Error> error;
  std::size_t end_offset = 0;  // first byte not consumed
  bool saw_end_of_track = false;
};

// Decodes until the input ends, an EndOfTrack is read, or an error occurs.
// Keeps the events decoded before the error.
StreamResult decode_stream(ByteView bytes, bool strict) {
  StreamResult result;
  std::optional<std::uint8_t> running;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    VlvDecoded delta;
    DecodedMessage decoded;
    try {
      delta = decode_vlv(bytes.subspan(pos), strict);
    } catch (const Error& e) {
      result.error = e.rebased(pos);
      break;
    }
    const auto msg_pos = pos + delta.consumed;
    try {
      decoded = decode_message(bytes.subspan(msg_pos), running, strict);
    } catch (const Error& e) {
      result.error = e.rebased(msg_pos);
      break;
    }
    running = decoded.running_status;
    pos = msg_pos + decoded.consumed;
    const bool eot = std::holds_alternative<EndOfTrack>(decoded.message);
    result.track.events.push_back({delta.value, std::move(decoded.message)});
    if (eot) {
      result.saw_end_of_track = true;
      break;
    }
  }
  result.end_offset = pos;
  return result;
}

void report(Diagnostics* sink, bool strict, std::optional<std::size_t> offset, std::string message) {
  if (strict) throw Error(Errc::strict, message, offset);
  if (sink) sink->push_back({offset, std::move(message)});
}

Message apply_style(const Message& m, NoteOffStyle style) {
  switch (style) {
    case NoteOffStyle::preserve:
      return m;
    case NoteOffStyle::on0:
      if (const auto* off = std::get_if<NoteOff>(&m); off && off->release == 0) {
        return NoteOn{off->channel, off->pitch, 0};
      }
      return m;
    case NoteOffStyle::off:
      return normalize_note_off(m);
  }
  return m;
}

std::string note_label(const Channel& ch, std::uint8_t pitch) {
  return format_pitch_name(pitch_to_name(pitch)) + " (pitch " + std::to_string(pitch) + ", channel " +
         std::to_string(ch.number()) + ")";
}

}  // namespace

bool Track::ends_with_end_of_track() const {
  return !events.empty() && std::holds_alternative<EndOfTrack>(events.back().message);
}

void Track::validate() const {
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    if (std::holds_alternative<EndOfTrack>(events[i].message)) {
      throw Error(Errc::invariant, "End of Track at event " + std::to_string(i) + " is not the last event");
    }
  }
  for (const auto& e : events) {
    if (e.delta > kMaxVlv) throw Error(Errc::range, "delta time exceeds 0x0FFFFFFF");
  }
}

StreamPrefix parse_event_stream_prefix(ByteView bytes, const ParseOptions& options) {
  auto result = decode_stream(bytes, options.strict);
  if (result.error) throw *result.error;
  return {std::move(result.track), result.end_offset, result.saw_end_of_track};
}

Track parse_event_stream(ByteView bytes, const ParseOptions& options, Diagnostics* warnings) {
  auto prefix = parse_event_stream_prefix(bytes, options);
  if (prefix.terminated && prefix.consumed < bytes.size()) {
    report(warnings, options.strict, prefix.consumed,
           std::to_string(bytes.size() - prefix.consumed) + " trailing bytes after End of Track ignored");
  }
  if (!prefix.terminated && !bytes.empty()) {
    report(warnings, options.strict, bytes.size(), "missing End of Track (FF 2F 00)");
  }
  return std::move(prefix.track);
}

Bytes serialize_event_stream(const Track& track, const SerializeOptions& options) {
  track.validate();
  Bytes out;
  std::optional<std::uint8_t> running;
  for (const auto& event : track.events) {
    append_vlv(out, event.delta);
    const auto message = apply_style(event.message, options.noteoff_style);
    const auto status_byte = channel_status_of(message);
    const auto start = out.size();
    append_message(out, message);
    if (status_byte) {
      if (options.use_running_status && running == status_byte) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(start));
      }
      running = status_byte;
    } else {
      running.reset();
    }
  }
  return out;
}

std::vector<TimedMessage> absolute_timeline(const Track& track) {
  std::vector<TimedMessage> out;
  out.reserve(track.events.size());
  AbsTicks tick = 0;
  for (const auto& event : track.events) {
    tick += event.delta;
    out.push_back({tick, event.message});
  }
  return out;
}

std::vector<TimedMessage> merge_timelines(const std::vector<std::vector<TimedMessage>>& timelines) {
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (track, index)
  for (std::size_t t = 0; t < timelines.size(); ++t) {
    for (std::size_t i = 0; i < timelines[t].size(); ++i) order.emplace_back(t, i);
  }
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return timelines[a.first][a.second].tick < timelines[b.first][b.second].tick;
  });
  std::vector<TimedMessage> out;
  out.reserve(order.size());
  for (const auto& [t, i] : order) out.push_back(timelines[t][i]);
  return out;
}

std::vector<NoteSpan> to_note_spans(const std::vector<TimedMessage>& timeline, SpanMode mode,
                                    Diagnostics* warnings) {
  struct Open {
    AbsTicks on_tick;
    std::uint8_t velocity;
  };
  // (channel, pitch) -> open notes, oldest first.
  std::map<std::pair<std::uint8_t, std::uint8_t>, std::deque<Open>> open;
  std::vector<NoteSpan> spans;
  AbsTicks last_tick = 0;

  auto close_front = [&](const std::pair<std::uint8_t, std::uint8_t>& key, AbsTicks tick) {
    auto& queue = open[key];
    spans.push_back({Channel(key.first), key.second, queue.front().velocity, queue.front().on_tick, tick});
    queue.pop_front();
  };

  for (const auto& [tick, message] : timeline) {
    last_tick = tick;
    if (is_sounding_note_on(message)) {
      const auto& on = std::get<NoteOn>(message);
      if (mode == SpanMode::mono) {
        for (auto& [key, queue] : open) {
          if (key.first != on.channel.index()) continue;
          while (!queue.empty()) close_front(key, tick);
        }
      }
      open[{on.channel.index(), on.pitch}].push_back({tick, on.velocity});
    } else if (is_note_release(message)) {
      const auto released = std::get<NoteOff>(normalize_note_off(message));
      const std::pair<std::uint8_t, std::uint8_t> key{released.channel.index(), released.pitch};
      auto it = open.find(key);
      if (it != open.end() && !it->second.empty()) {
        close_front(key, tick);
      } else if (mode == SpanMode::poly && warnings) {
        warnings->push_back({std::nullopt, "release of " + note_label(released.channel, released.pitch) +
                                               " at tick " + std::to_string(tick) + " matches no sounding note"});
      }
    }
  }

  for (auto& [key, queue] : open) {
    while (!queue.empty()) {
      if (warnings) {
        warnings->push_back({std::nullopt, "unclosed note " + note_label(Channel(key.first), key.second) +
                                               " started at tick " + std::to_string(queue.front().on_tick)});
      }
      close_front(key, last_tick);
    }
  }

  std::stable_sort(spans.begin(), spans.end(), [](const NoteSpan& a, const NoteSpan& b) {
    if (a.on_tick != b.on_tick) return a.on_tick < b.on_tick;
    if (a.pitch != b.pitch) return a.pitch < b.pitch;
    if (a.channel != b.channel) return a.channel < b.channel;
    return a.off_tick < b.off_tick;
  });
  return spans;
}

std::vector<NoteSpan> to_note_spans(const Track& track, SpanMode mode, Diagnostics* warnings) {
  return to_note_spans(absolute_timeline(track), mode, warnings);
}

std::string Finding::to_string() const {
  std::string out = severity == Severity::error ? "error" : "warning";
  if (offset) out += " at byte " + std::to_string(*offset);
  return out + ": " + message;
}

std::vector<Finding> check_event_stream(ByteView bytes, std::size_t base_offset) {
  std::vector<Finding> findings;
  auto result = decode_stream(bytes, false);
  if (result.error) {
    const auto& e = *result.error;
    findings.push_back({Severity::error,
                        e.offset() ? std::optional<std::size_t>(*e.offset() + base_offset) : std::nullopt,
                        std::string(errc_name(e.code())) + ": " + e.detail()});
  } else if (result.saw_end_of_track && result.end_offset < bytes.size()) {
    findings.push_back({Severity::warning, result.end_offset + base_offset,
                        std::to_string(bytes.size() - result.end_offset) + " trailing bytes after End of Track"});
  } else if (!result.saw_end_of_track) {
    findings.push_back({Severity::warning, bytes.size() + base_offset, "missing End of Track (FF 2F 00)"});
  }

  Diagnostics span_warnings;
  to_note_spans(result.track, SpanMode::poly, &span_warnings);
  for (auto& w : span_warnings) findings.push_back({Severity::warning, std::nullopt, std::move(w.message)});
  return findings;
}

}  // namespace smfkit
