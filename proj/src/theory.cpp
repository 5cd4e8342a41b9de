#include "smfkit/theory.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace smfkit {
namespace {

constexpr std::array<int, 7> kLetterSemitone = {9, 11, 0, 2, 4, 5, 7};  // A B C D E F G
constexpr std::array<const char*, 12> kSharpNames = {"C",  "C#", "D",  "D#", "E",  "F",
                                                     "F#", "G",  "G#", "A",  "A#", "B"};

constexpr std::array<std::string_view, 8> kDynamicNames = {"ppp", "pp", "p", "mp", "mf", "f", "ff", "fff"};

}  // namespace

std::uint8_t name_to_pitch(const PitchName& name) {
  if (name.letter < 'A' || name.letter > 'G') {
    throw Error(Errc::range, std::string("pitch letter '") + name.letter + "' is not A..G");
  }
  if (name.accidental < -1 || name.accidental > 1) throw Error(Errc::range, "accidental must be -1, 0 or +1");
  const long pitch = 12L * (name.octave + 1) + kLetterSemitone[name.letter - 'A'] + name.accidental;
  if (pitch < 0 || pitch > 127) {
    throw Error(Errc::range, format_pitch_name(name) + " is outside the MIDI pitch range 0..127");
  }
  return static_cast<std::uint8_t>(pitch);
}

PitchName pitch_to_name(std::uint8_t pitch) {
  if (pitch > 127) throw Error(Errc::range, "pitch " + std::to_string(pitch) + " exceeds 127");
  const char* spelled = kSharpNames[pitch % 12];
  return {spelled[0], spelled[1] == '#' ? 1 : 0, pitch / 12 - 1};
}

PitchName parse_pitch_name(std::string_view text) {
  auto fail = [&]() -> PitchName {
    throw Error(Errc::syntax, "'" + std::string(text) + "' is not a pitch name");
  };
  if (text.size() < 2) return fail();
  PitchName name;
  name.letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  if (name.letter < 'A' || name.letter > 'G') return fail();
  std::size_t i = 1;
  if (text[i] == '#') {
    name.accidental = 1;
    ++i;
  } else if (text[i] == 'b') {
    name.accidental = -1;
    ++i;
  }
  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  if (i == text.size() || text.size() - i > 2) return fail();
  int octave = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return fail();
    octave = octave * 10 + (text[i] - '0');
  }
  name.octave = negative ? -octave : octave;
  return name;
}

std::string format_pitch_name(const PitchName& name) {
  std::string out(1, name.letter);
  if (name.accidental > 0) out += '#';
  if (name.accidental < 0) out += 'b';
  return out + std::to_string(name.octave);
}

NoteValue::NoteValue(std::uint64_t numerator, std::uint64_t denominator) {
  if (numerator == 0 || denominator == 0) {
    throw Error(Errc::range, "note value " + std::to_string(numerator) + "/" + std::to_string(denominator) +
                                 " must be positive");
  }
  const auto g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

std::uint64_t duration_to_ticks(const NoteValue& value, std::uint32_t ppq) {
  if (ppq == 0) throw Error(Errc::range, "ticks per quarter must be at least 1");
  // round half up of 4*ppq*num/den, computed as floor((8*ppq*num + den) / (2*den)).
  const std::uint64_t factor = 8ULL * ppq;
  if (value.numerator() > (UINT64_MAX / 2) / factor || value.denominator() > UINT64_MAX / 4) {
    throw Error(Errc::range, "note value too long");
  }
  return (factor * value.numerator() + value.denominator()) / (2 * value.denominator());
}

std::optional<std::string> plain_note_value_name(std::uint64_t ticks, std::uint32_t ppq) {
  if (ticks == 0 || ppq == 0) return std::nullopt;
  for (std::uint64_t den = 1; den <= 64; den *= 2) {
    if (ticks * den == 4ULL * ppq) return "1/" + std::to_string(den);
  }
  return std::nullopt;
}

std::uint32_t bpm_to_tempo(double bpm) {
  if (!std::isfinite(bpm) || bpm <= 0) throw Error(Errc::range, "tempo must be a positive number of bpm");
  const double us = std::round(60e6 / bpm);
  if (us < 1 || us > 4294967295.0) throw Error(Errc::range, "tempo out of range");
  return static_cast<std::uint32_t>(us);
}

double tempo_to_bpm(std::uint32_t microseconds_per_quarter) {
  if (microseconds_per_quarter == 0) throw Error(Errc::range, "tempo of 0 us per quarter");
  return 60e6 / microseconds_per_quarter;
}

std::uint8_t dynamic_to_velocity(DynamicMark mark, const DynamicsTable& table) { return table.velocity(mark); }

std::optional<DynamicMark> parse_dynamic(std::string_view text) {
  for (std::size_t i = 0; i < kDynamicNames.size(); ++i) {
    if (kDynamicNames[i] == text) return static_cast<DynamicMark>(i);
  }
  return std::nullopt;
}

std::string_view dynamic_name(DynamicMark mark) { return kDynamicNames[static_cast<std::size_t>(mark)]; }

std::string key_signature_name(const KeySignature& key) {
  static constexpr std::array<const char*, 15> kMajor = {"Cb", "Gb", "Db", "Ab", "Eb", "Bb", "F", "C",
                                                         "G",  "D",  "A",  "E",  "B",  "F#", "C#"};
  static constexpr std::array<const char*, 15> kMinor = {"Ab", "Eb", "Bb", "F",  "C",  "G",  "D", "A",
                                                         "E",  "B",  "F#", "C#", "G#", "D#", "A#"};
  if (key.sharps_flats < -7 || key.sharps_flats > 7 || key.mode > 1) return "invalid key";
  const auto idx = static_cast<std::size_t>(key.sharps_flats + 7);
  return key.mode == 0 ? std::string(kMajor[idx]) + " major" : std::string(kMinor[idx]) + " minor";
}

}  // namespace smfkit
