#include "smfkit/smf.hpp"

#include <algorithm>
#include <string>

namespace smfkit {
namespace {

constexpr std::uint8_t kHeaderMagic[4] = {'M', 'T', 'h', 'd'};
constexpr std::uint8_t kTrackMagic[4] = {'M', 'T', 'r', 'k'};

std::uint32_t read_be32(ByteView b, std::size_t pos) {
  return (std::uint32_t{b[pos]} << 24) | (std::uint32_t{b[pos + 1]} << 16) | (std::uint32_t{b[pos + 2]} << 8) |
         b[pos + 3];
}

std::uint16_t read_be16(ByteView b, std::size_t pos) {
  return static_cast<std::uint16_t>((b[pos] << 8) | b[pos + 1]);
}

void write_be32(Bytes& out, std::uint32_t v) {
  out.insert(out.end(), {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
                         static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)});
}

void write_be16(Bytes& out, std::uint16_t v) {
  out.insert(out.end(), {static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)});
}

bool has_magic(ByteView b, std::size_t pos, const std::uint8_t (&magic)[4]) {
  return b.size() >= pos + 4 && std::equal(std::begin(magic), std::end(magic), b.begin() + pos);
}

std::string chunk_name(ByteView b, std::size_t pos) {
  std::string name;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = b[pos + i];
    name += (c >= 0x20 && c < 0x7F) ? static_cast<char>(c) : '?';
  }
  return name;
}

}  // namespace

void SmfFile::validate() const {
  if (format > 2) throw Error(Errc::range, "SMF format " + std::to_string(format) + " is not 0, 1 or 2");
  if (format == 0 && tracks.size() != 1) {
    throw Error(Errc::invariant, "format 0 requires exactly one track, got " + std::to_string(tracks.size()));
  }
  if (division_ppq == 0) throw Error(Errc::range, "ticks per quarter must be at least 1");
  if (division_ppq & 0x8000) throw Error(Errc::smpte_division, "SMPTE time division is not supported");
  if (tracks.size() > 0xFFFF) throw Error(Errc::range, "too many tracks");
  for (const auto& t : tracks) t.validate();
}

bool looks_like_smf(ByteView bytes) { return has_magic(bytes, 0, kHeaderMagic); }

SmfFile parse_smf(ByteView bytes, const ParseOptions& options, Diagnostics* warnings) {
  auto warn = [&](std::optional<std::size_t> offset, std::string message) {
    if (options.strict) throw Error(Errc::strict, message, offset);
    if (warnings) warnings->push_back({offset, std::move(message)});
  };

  if (!looks_like_smf(bytes)) throw Error(Errc::bad_magic, "input does not start with an MThd chunk", 0);
  if (bytes.size() < 14) throw Error(Errc::truncated, "header chunk is truncated", bytes.size());
  const auto header_length = read_be32(bytes, 4);
  if (header_length != 6) {
    throw Error(Errc::length_mismatch, "header chunk length is " + std::to_string(header_length) + ", expected 6", 4);
  }

  SmfFile file;
  file.format = read_be16(bytes, 8);
  const auto declared_tracks = read_be16(bytes, 10);
  const auto division = read_be16(bytes, 12);
  if (file.format > 2) throw Error(Errc::range, "SMF format " + std::to_string(file.format) + " is not 0, 1 or 2", 8);
  if (division & 0x8000) throw Error(Errc::smpte_division, "SMPTE time division is not supported", 12);
  if (division == 0) throw Error(Errc::range, "ticks per quarter must be at least 1", 12);
  file.division_ppq = division;

  std::size_t pos = 14;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 8) throw Error(Errc::truncated, "chunk header is truncated", pos);
    const auto length = read_be32(bytes, pos + 4);
    const auto body = pos + 8;
    if (bytes.size() - body < length) {
      throw Error(Errc::truncated,
                  "chunk declares " + std::to_string(length) + " bytes, " + std::to_string(bytes.size() - body) +
                      " remain",
                  pos + 4);
    }
    if (!has_magic(bytes, pos, kTrackMagic)) {
      warn(pos, "skipped unknown chunk '" + chunk_name(bytes, pos) + "'");
      pos = body + length;
      continue;
    }

    StreamPrefix parsed;
    try {
      parsed = parse_event_stream_prefix(bytes.subspan(body, length), options);
    } catch (const Error& e) {
      throw e.rebased(body);
    }
    if (parsed.terminated && parsed.consumed < length) {
      throw Error(Errc::length_mismatch,
                  "track chunk declares " + std::to_string(length) + " bytes but its End of Track ends after " +
                      std::to_string(parsed.consumed),
                  pos + 4);
    }
    if (!parsed.terminated) warn(body + length, "track chunk has no End of Track (FF 2F 00)");
    auto& track = parsed.track;
    file.tracks.push_back(std::move(track));
    pos = body + length;
  }

  if (file.tracks.size() != declared_tracks) {
    warn(10, "header declares " + std::to_string(declared_tracks) + " tracks, found " +
                 std::to_string(file.tracks.size()));
  }
  if (file.format == 0 && file.tracks.size() != 1) {
    throw Error(Errc::invariant, "format 0 file holds " + std::to_string(file.tracks.size()) + " tracks", 8);
  }
  return file;
}

Bytes write_smf(const SmfFile& file, const SerializeOptions& options) {
  file.validate();
  Bytes out(std::begin(kHeaderMagic), std::end(kHeaderMagic));
  write_be32(out, 6);
  write_be16(out, file.format);
  write_be16(out, static_cast<std::uint16_t>(file.tracks.size()));
  write_be16(out, file.division_ppq);

  for (const auto& track : file.tracks) {
    Bytes body;
    if (track.ends_with_end_of_track()) {
      body = serialize_event_stream(track, options);
    } else {
      Track terminated = track;
      terminated.events.push_back({0, EndOfTrack{}});
      body = serialize_event_stream(terminated, options);
    }
    if (body.size() > 0xFFFFFFFFULL) throw Error(Errc::range, "track chunk exceeds 4 GiB");
    out.insert(out.end(), std::begin(kTrackMagic), std::end(kTrackMagic));
    write_be32(out, static_cast<std::uint32_t>(body.size()));
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

std::vector<Finding> check_smf(ByteView bytes) {
  std::vector<Finding> findings;
  auto error = [&](std::size_t offset, std::string message) {
    findings.push_back({Severity::error, offset, std::move(message)});
  };
  if (!looks_like_smf(bytes)) {
    error(0, "input does not start with an MThd chunk");
    return findings;
  }
  if (bytes.size() < 14) {
    error(bytes.size(), "header chunk is truncated");
    return findings;
  }
  if (read_be32(bytes, 4) != 6) error(4, "header chunk length is not 6");
  const auto format = read_be16(bytes, 8);
  const auto declared = read_be16(bytes, 10);
  const auto division = read_be16(bytes, 12);
  if (format > 2) error(8, "SMF format " + std::to_string(format) + " is not 0, 1 or 2");
  if (division & 0x8000) error(12, "SMPTE time division is not supported");
  if (division == 0) error(12, "ticks per quarter is 0");

  std::size_t pos = 8 + read_be32(bytes, 4);
  std::size_t tracks = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 8) {
      error(pos, "chunk header is truncated");
      return findings;
    }
    const auto length = read_be32(bytes, pos + 4);
    const auto body = pos + 8;
    if (bytes.size() - body < length) {
      error(pos + 4, "chunk declares " + std::to_string(length) + " bytes, " + std::to_string(bytes.size() - body) +
                         " remain");
      return findings;
    }
    if (has_magic(bytes, pos, kTrackMagic)) {
      ++tracks;
      auto track_findings = check_event_stream(bytes.subspan(body, length), body);
      for (auto& f : track_findings) {
        if (f.message.find("trailing bytes") != std::string::npos) {
          f.severity = Severity::error;
          f.message = "track chunk length extends past its End of Track";
        }
        findings.push_back(std::move(f));
      }
    } else {
      findings.push_back({Severity::warning, pos, "unknown chunk '" + chunk_name(bytes, pos) + "' skipped"});
    }
    pos = body + length;
  }
  if (tracks != declared) {
    findings.push_back({Severity::warning, 10, "header declares " + std::to_string(declared) + " tracks, found " +
                                                   std::to_string(tracks)});
  }
  if (format == 0 && tracks != 1) error(8, "format 0 file holds " + std::to_string(tracks) + " tracks");
  return findings;
}

std::vector<TimedMessage> merged_timeline(const SmfFile& file) {
  std::vector<std::vector<TimedMessage>> timelines;
  timelines.reserve(file.tracks.size());
  for (const auto& t : file.tracks) timelines.push_back(absolute_timeline(t));
  return merge_timelines(timelines);
}

AbsTicks duration_ticks(const SmfFile& file) {
  AbsTicks end = 0;
  for (const auto& t : file.tracks) {
    AbsTicks tick = 0;
    for (const auto& e : t.events) tick += e.delta;
    end = std::max(end, tick);
  }
  return end;
}

double duration_seconds(const SmfFile& file) {
  const double ppq = file.division_ppq ? file.division_ppq : kDefaultPpq;
  double seconds = 0;
  AbsTicks prev = 0;
  std::uint32_t tempo = kDefaultTempo;
  for (const auto& [tick, message] : merged_timeline(file)) {
    seconds += static_cast<double>(tick - prev) * tempo / (ppq * 1e6);
    prev = tick;
    if (const auto* t = std::get_if<SetTempo>(&message)) tempo = t->microseconds_per_quarter;
  }
  return seconds;
}

}  // namespace smfkit
