#pragma once

#include <cstdint>
#include <vector>

#include "smfkit/track.hpp"

namespace smfkit {

inline constexpr std::uint16_t kDefaultPpq = 128;
inline constexpr std::uint32_t kDefaultTempo = 500000;  // 120 bpm

// Header chunk plus track chunks. Only ticks-per-quarter divisions.
struct SmfFile {
  std::uint16_t format = 0;  // 0, 1 or 2; format 0 holds exactly one track
  std::uint16_t division_ppq = kDefaultPpq;
  std::vector<Track> tracks;

  // Throws Errc::invariant / Errc::range on a violated invariant.
  void validate() const;

  bool operator==(const SmfFile&) const = default;
};

bool looks_like_smf(ByteView bytes);

// Reads MThd + MTrk chunks. Unknown chunks are skipped with a warning.
// Errors carry absolute file offsets.
SmfFile parse_smf(ByteView bytes, const ParseOptions& options = {}, Diagnostics* warnings = nullptr);

// Serializes each track, appending an EndOfTrack where missing, and frames the
// result. Chunk lengths are computed after serialization.
Bytes write_smf(const SmfFile& file, const SerializeOptions& options = {});

// All tracks merged into one timeline (see merge_timelines).
std::vector<TimedMessage> merged_timeline(const SmfFile& file);

// Validation pass for `check`: container problems plus check_event_stream
// findings for every track chunk, with absolute offsets.
std::vector<Finding> check_smf(ByteView bytes);

// Tick of the last event across all tracks.
AbsTicks duration_ticks(const SmfFile& file);

// Wall-clock length following every SetTempo; 120 bpm until the first one.
double duration_seconds(const SmfFile& file);

}  // namespace smfkit
