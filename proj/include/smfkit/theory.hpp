#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "smfkit/message.hpp"

namespace smfkit {

// Scientific pitch name with C4 = 60.
struct PitchName {
  char letter = 'C';   // 'A'..'G'
  int accidental = 0;  // -1 flat, 0 natural, +1 sharp
  int octave = 4;
  bool operator==(const PitchName&) const = default;
};

// Throws Errc::range when the name falls outside 0..127 or the fields are
// not a valid spelling.
std::uint8_t name_to_pitch(const PitchName& name);
// Canonical spelling: naturals and sharps only.
PitchName pitch_to_name(std::uint8_t pitch);

// "C4", "F#3", "Bb2", "C-1". Throws Errc::syntax on anything else.
PitchName parse_pitch_name(std::string_view text);
std::string format_pitch_name(const PitchName& name);

// Duration as a fraction of a whole note, kept in lowest terms.
class NoteValue {
 public:
  NoteValue(std::uint64_t numerator, std::uint64_t denominator);

  std::uint64_t numerator() const noexcept { return num_; }
  std::uint64_t denominator() const noexcept { return den_; }

  bool operator==(const NoteValue&) const = default;

 private:
  std::uint64_t num_;
  std::uint64_t den_;
};

// round(4 * ppq * value), ties rounded up.
std::uint64_t duration_to_ticks(const NoteValue& value, std::uint32_t ppq);

// "1/4" when `ticks` is exactly a whole, half, ... 64th note at `ppq`.
std::optional<std::string> plain_note_value_name(std::uint64_t ticks, std::uint32_t ppq);

// round(60e6 / bpm). Throws Errc::range for non-positive or non-finite bpm,
// or a result that does not fit in 32 bits.
std::uint32_t bpm_to_tempo(double bpm);
double tempo_to_bpm(std::uint32_t microseconds_per_quarter);

enum class DynamicMark : std::uint8_t { ppp, pp, p, mp, mf, f, ff, fff };

inline constexpr std::array<DynamicMark, 8> kAllDynamics = {
    DynamicMark::ppp, DynamicMark::pp, DynamicMark::p,  DynamicMark::mp,
    DynamicMark::mf,  DynamicMark::f,  DynamicMark::ff, DynamicMark::fff};

// Velocity for each dynamic mark, ppp..fff. Replaceable per assembly.
struct DynamicsTable {
  std::array<std::uint8_t, 8> velocities{20, 31, 42, 53, 64, 80, 96, 127};

  std::uint8_t velocity(DynamicMark mark) const { return velocities[static_cast<std::size_t>(mark)]; }
};

std::uint8_t dynamic_to_velocity(DynamicMark mark, const DynamicsTable& table = {});
std::optional<DynamicMark> parse_dynamic(std::string_view text);
std::string_view dynamic_name(DynamicMark mark);

// "C major", "E minor", "Bb major"...
std::string key_signature_name(const KeySignature& key);

}  // namespace smfkit
