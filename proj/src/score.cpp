#include "smfkit/score.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace smfkit {
namespace {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;  // comment only at the start of a token
    const auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

template <class Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view text) {
  double value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

class ScoreParser {
 public:
  explicit ScoreParser(std::string_view text) : text_(text) {}

  Score run() {
    std::size_t start = 0;
    while (start <= text_.size()) {
      auto end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      auto line = text_.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no_;
      parse_line(tokenize_line(line));
      if (end == text_.size()) break;
      start = end + 1;
    }
    close_voice();
    if (score_.voices.empty()) fail(Errc::syntax, "score has no voices", 1, 1);
    return std::move(score_);
  }

 private:
  [[noreturn]] void fail(Errc code, const std::string& message, std::size_t line, std::size_t column) const {
    throw SyntaxError(code, message, line, column);
  }
  [[noreturn]] void fail(Errc code, const std::string& message, const Token& at) const {
    fail(code, message, line_no_, at.column);
  }

  template <class Int>
  Int number(const Token& t, long long lo, long long hi, const char* what) const {
    const auto v = parse_int<long long>(t.text);
    if (!v) fail(Errc::syntax, std::string("expected ") + what + ", got '" + std::string(t.text) + "'", t);
    if (*v < lo || *v > hi) {
      fail(Errc::range, std::string(what) + " " + std::to_string(*v) + " outside " + std::to_string(lo) + ".." +
                            std::to_string(hi),
           t);
    }
    return static_cast<Int>(*v);
  }

  const Token& expect(const std::vector<Token>& tokens, std::size_t i, const char* what) const {
    if (i >= tokens.size()) {
      const auto col = tokens.empty() ? 1 : tokens.back().column + tokens.back().text.size();
      fail(Errc::syntax, std::string("expected ") + what, line_no_, col);
    }
    return tokens[i];
  }

  void no_more(const std::vector<Token>& tokens, std::size_t i) const {
    if (i < tokens.size()) fail(Errc::syntax, "unexpected '" + std::string(tokens[i].text) + "'", tokens[i]);
  }

  void parse_line(const std::vector<Token>& tokens) {
    if (tokens.empty()) return;
    const auto& head = tokens[0].text;
    if (head == "ppq") {
      score_.ppq = number<std::uint32_t>(expect(tokens, 1, "ticks per quarter"), 1, 32767, "ppq");
      no_more(tokens, 2);
    } else if (head == "tempo") {
      const auto& t = expect(tokens, 1, "tempo in bpm");
      const auto bpm = parse_double(t.text);
      if (!bpm || !std::isfinite(*bpm) || *bpm <= 0) fail(Errc::syntax, "tempo must be a positive number", t);
      if (bpm_to_tempo(*bpm) > 0xFFFFFF) fail(Errc::range, "tempo too slow for a 24-bit tempo event", t);
      score_.tempo_bpm = *bpm;
      no_more(tokens, 2);
    } else if (head == "timesig") {
      parse_timesig(tokens);
    } else if (head == "keysig") {
      parse_keysig(tokens);
    } else if (head == "noteoff") {
      const auto& t = expect(tokens, 1, "on0 or off");
      if (t.text == "on0") {
        score_.noteoff_style = NoteOffStyle::on0;
      } else if (t.text == "off") {
        score_.noteoff_style = NoteOffStyle::off;
      } else {
        fail(Errc::syntax, "noteoff style must be on0 or off", t);
      }
      no_more(tokens, 2);
    } else if (head == "voice") {
      parse_voice_header(tokens);
    } else {
      parse_items(tokens, 0);
    }
  }

  void parse_timesig(const std::vector<Token>& tokens) {
    const auto& t = expect(tokens, 1, "time signature N/M");
    const auto slash = t.text.find('/');
    if (slash == std::string_view::npos) fail(Errc::syntax, "time signature must be N/M", t);
    const Token num_tok{t.text.substr(0, slash), t.column};
    const Token den_tok{t.text.substr(slash + 1), t.column + slash + 1};
    TimeSignature ts;
    ts.numerator = number<std::uint8_t>(num_tok, 1, 255, "time signature numerator");
    const auto den = number<std::uint32_t>(den_tok, 1, 1u << 30, "time signature denominator");
    if ((den & (den - 1)) != 0) fail(Errc::range, "time signature denominator must be a power of two", den_tok);
    ts.denominator_pow2 = static_cast<std::uint8_t>(std::countr_zero(den));
    if (tokens.size() > 2) ts.clocks_per_click = number<std::uint8_t>(tokens[2], 0, 255, "clocks per click");
    if (tokens.size() > 3) {
      ts.thirty_seconds_per_quarter = number<std::uint8_t>(tokens[3], 0, 255, "32nds per quarter");
    }
    no_more(tokens, 4);
    score_.time_signature = ts;
  }

  void parse_keysig(const std::vector<Token>& tokens) {
    KeySignature key;
    key.sharps_flats = number<std::int8_t>(expect(tokens, 1, "number of sharps or flats"), -7, 7, "key signature");
    if (tokens.size() > 2) {
      if (tokens[2].text == "major") {
        key.mode = 0;
      } else if (tokens[2].text == "minor") {
        key.mode = 1;
      } else {
        fail(Errc::syntax, "key mode must be major or minor", tokens[2]);
      }
    }
    no_more(tokens, 3);
    score_.key_signature = key;
  }

  void parse_voice_header(const std::vector<Token>& tokens) {
    close_voice();
    // Header tokens run up to the one carrying the ':'.
    std::vector<Token> header;
    std::size_t next = 1;
    bool closed = false;
    for (; next < tokens.size() && !closed; ++next) {
      auto t = tokens[next];
      if (!t.text.empty() && t.text.back() == ':') {
        t.text.remove_suffix(1);
        closed = true;
      }
      if (!t.text.empty()) header.push_back(t);
    }
    if (!closed) fail(Errc::syntax, "voice header must end with ':'", line_no_, tokens.back().column);
    if (header.empty()) fail(Errc::syntax, "expected chK after 'voice'", tokens[0]);

    const auto& ch = header[0];
    if (ch.text.size() < 3 || ch.text.substr(0, 2) != "ch") {
      fail(Errc::syntax, "expected chK, got '" + std::string(ch.text) + "'", ch);
    }
    const Token number_tok{ch.text.substr(2), ch.column + 2};
    Voice voice{Channel::from_number(number<int>(number_tok, 1, 16, "channel")), {}};

    if (header.size() > 1) {
      if (header[1].text != "program") {
        fail(Errc::syntax, "expected 'program', got '" + std::string(header[1].text) + "'", header[1]);
      }
      if (header.size() < 3) fail(Errc::syntax, "expected a program number", header[1]);
      const auto program = number<std::uint8_t>(header[2], 0, 127, "program");
      if (header.size() > 3) fail(Errc::syntax, "unexpected '" + std::string(header[3].text) + "'", header[3]);
      bind(voice.channel, program, header[2]);
    }

    score_.voices.push_back(std::move(voice));
    voice_line_ = line_no_;
    voice_column_ = tokens[0].column;
    in_voice_ = true;
    parse_items(tokens, next);
  }

  void bind(Channel channel, std::uint8_t program, const Token& at) {
    for (const auto& b : score_.bindings) {
      if (b.channel != channel) continue;
      if (b.program != program) {
        fail(Errc::syntax, "channel " + std::to_string(channel.number()) + " already bound to program " +
                               std::to_string(b.program),
             at);
      }
      return;
    }
    score_.bindings.push_back({channel, program});
  }

  void close_voice() {
    if (in_voice_ && score_.voices.back().items.empty()) {
      fail(Errc::syntax, "voice has no items", voice_line_, voice_column_);
    }
    in_voice_ = false;
  }

  NoteValue parse_value(const Token& t) const {
    const auto slash = t.text.find('/');
    const auto num_text = t.text.substr(0, slash);
    const auto den_text = slash == std::string_view::npos ? std::string_view("1") : t.text.substr(slash + 1);
    const auto num = parse_int<std::uint64_t>(num_text);
    const auto den = parse_int<std::uint64_t>(den_text);
    if (!num || !den) fail(Errc::syntax, "bad note value '" + std::string(t.text) + "', expected p/q", t);
    if (*num == 0 || *den == 0) fail(Errc::range, "note value must be positive", t);
    if (*num > 0xFFFFFFFFull || *den > 0xFFFFFFFFull) fail(Errc::range, "note value too large", t);
    return NoteValue(*num, *den);
  }

  void parse_items(const std::vector<Token>& tokens, std::size_t i) {
    while (i < tokens.size()) {
      const auto& t = tokens[i];
      if (t.text == "|") {
        ++i;
        continue;
      }
      if (!in_voice_) fail(Errc::syntax, "'" + std::string(t.text) + "' outside a voice", t);
      auto& items = score_.voices.back().items;

      if (t.text == "R" || t.text == "r") {
        items.push_back(RestItem{parse_value(expect(tokens, i + 1, "rest duration p/q"))});
        i += 2;
        continue;
      }

      std::vector<std::uint8_t> pitches;
      std::size_t start = 0;
      while (start <= t.text.size()) {
        auto plus = t.text.find('+', start);
        if (plus == std::string_view::npos) plus = t.text.size();
        const auto name = t.text.substr(start, plus - start);
        const Token part{name, t.column + start};
        std::uint8_t pitch = 0;
        try {
          pitch = name_to_pitch(parse_pitch_name(name));
        } catch (const Error& e) {
          fail(e.code() == Errc::range ? Errc::range : Errc::syntax,
               e.code() == Errc::range ? e.detail() : "unknown pitch '" + std::string(name) + "'", part);
        }
        if (std::find(pitches.begin(), pitches.end(), pitch) != pitches.end()) {
          fail(Errc::syntax, "pitch " + std::string(name) + " repeated in chord", part);
        }
        pitches.push_back(pitch);
        start = plus + 1;
      }

      NoteItem note{std::move(pitches), parse_value(expect(tokens, i + 1, "note duration p/q")), DynamicMark::mf, 0};
      i += 2;
      bool loudness_set = false;
      bool release_set = false;
      while (i < tokens.size()) {
        const auto& m = tokens[i];
        if (const auto dyn = parse_dynamic(m.text)) {
          if (loudness_set) fail(Errc::syntax, "note loudness given twice", m);
          note.loudness = *dyn;
          loudness_set = true;
        } else if (m.text.size() > 1 && m.text[0] == 'v') {
          if (loudness_set) fail(Errc::syntax, "note loudness given twice", m);
          note.loudness = number<std::uint8_t>({m.text.substr(1), m.column + 1}, 1, 127, "velocity");
          loudness_set = true;
        } else if (m.text.size() > 1 && m.text[0] == 'r') {
          if (release_set) fail(Errc::syntax, "release velocity given twice", m);
          note.release = number<std::uint8_t>({m.text.substr(1), m.column + 1}, 0, 127, "release velocity");
          release_set = true;
        } else {
          break;
        }
        ++i;
      }
      items.push_back(std::move(note));
    }
  }

  std::string_view text_;
  Score score_;
  std::size_t line_no_ = 0;
  bool in_voice_ = false;
  std::size_t voice_line_ = 0;
  std::size_t voice_column_ = 0;
};

struct PendingNote {
  AbsTicks on_tick = 0;
  AbsTicks off_tick = 0;
  std::size_t voice = 0;
  std::size_t sequence = 0;  // position within the voice, chords expanded
  Channel channel;
  std::uint8_t pitch = 0;
  std::uint8_t velocity = 0;
  std::uint8_t release = 0;
};

struct NoteEvent {
  AbsTicks tick;
  bool is_on;
  const PendingNote* note;
};

std::string format_ratio(std::uint64_t num, std::uint64_t den) {
  const auto g = std::gcd(num, den);
  return std::to_string(num / g) + "/" + std::to_string(den / g);
}

std::string format_bpm(double bpm) {
  std::ostringstream os;
  os.precision(10);
  os << bpm;
  return os.str();
}

}  // namespace

Score parse_score(std::string_view text) { return ScoreParser(text).run(); }

Track assemble_track(const Score& score, const AssembleOptions& options) {
  if (score.ppq == 0 || score.ppq > 32767) throw Error(Errc::range, "ppq must be within 1..32767");
  const auto style = options.noteoff_style.value_or(score.noteoff_style);

  std::vector<PendingNote> notes;
  AbsTicks end_tick = 0;
  for (std::size_t v = 0; v < score.voices.size(); ++v) {
    const auto& voice = score.voices[v];
    AbsTicks tick = 0;
    std::size_t sequence = 0;
    for (const auto& item : voice.items) {
      if (const auto* rest = std::get_if<RestItem>(&item)) {
        tick += duration_to_ticks(rest->value, score.ppq);
        continue;
      }
      const auto& note = std::get<NoteItem>(item);
      const auto length = duration_to_ticks(note.value, score.ppq);
      if (length == 0) {
        throw Error(Errc::invariant, "note " + format_ratio(note.value.numerator(), note.value.denominator()) +
                                         " is shorter than one tick at ppq " + std::to_string(score.ppq));
      }
      const auto velocity = std::holds_alternative<DynamicMark>(note.loudness)
                                ? options.dynamics.velocity(std::get<DynamicMark>(note.loudness))
                                : std::get<std::uint8_t>(note.loudness);
      if (velocity == 0 || velocity > 127) throw Error(Errc::range, "note velocity must be within 1..127");
      for (auto pitch : note.pitches) {
        if (pitch > 127) throw Error(Errc::range, "pitch exceeds 127");
        notes.push_back({tick, tick + length, v, sequence++, voice.channel, pitch, velocity, note.release});
      }
      tick += length;
    }
    end_tick = std::max(end_tick, tick);
  }

  // Same channel and pitch may not sound twice at once.
  std::map<std::pair<std::uint8_t, std::uint8_t>, std::vector<const PendingNote*>> by_key;
  for (const auto& n : notes) by_key[{n.channel.index(), n.pitch}].push_back(&n);
  for (auto& [key, list] : by_key) {
    std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->on_tick < b->on_tick; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i]->on_tick < list[i - 1]->off_tick) {
        throw Error(Errc::invariant, format_pitch_name(pitch_to_name(key.second)) + " on channel " +
                                         std::to_string(key.first + 1) + " overlaps itself at tick " +
                                         std::to_string(list[i]->on_tick));
      }
    }
  }

  std::vector<NoteEvent> events;
  events.reserve(notes.size() * 2);
  for (const auto& n : notes) {
    events.push_back({n.on_tick, true, &n});
    events.push_back({n.off_tick, false, &n});
  }
  std::sort(events.begin(), events.end(), [](const NoteEvent& a, const NoteEvent& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    if (a.is_on != b.is_on) return !a.is_on;
    if (!a.is_on && a.note->on_tick != b.note->on_tick) return a.note->on_tick > b.note->on_tick;
    if (a.note->voice != b.note->voice) return a.note->voice < b.note->voice;
    return a.note->sequence < b.note->sequence;
  });

  Track track;
  if (score.time_signature) track.events.push_back({0, *score.time_signature});
  if (score.key_signature) track.events.push_back({0, *score.key_signature});
  if (score.tempo_bpm) track.events.push_back({0, SetTempo{bpm_to_tempo(*score.tempo_bpm)}});
  for (const auto& b : score.bindings) track.events.push_back({0, ProgramChange{b.channel, b.program}});

  AbsTicks last = 0;
  auto delta_to = [&](AbsTicks tick) {
    const auto delta = tick - last;
    if (delta > kMaxVlv) throw Error(Errc::range, "gap between events exceeds the VLV range");
    last = tick;
    return static_cast<Ticks>(delta);
  };
  for (const auto& e : events) {
    const auto& n = *e.note;
    Message m;
    if (e.is_on) {
      m = NoteOn{n.channel, n.pitch, n.velocity};
    } else if (style == NoteOffStyle::off) {
      m = NoteOff{n.channel, n.pitch, n.release};
    } else {
      m = NoteOn{n.channel, n.pitch, 0};
    }
    track.events.push_back({delta_to(e.tick), std::move(m)});
  }
  track.events.push_back({delta_to(std::max(end_tick, last)), EndOfTrack{}});
  return track;
}

SmfFile assemble(const Score& score, const AssembleOptions& options) {
  SmfFile file;
  file.format = 0;
  file.division_ppq = static_cast<std::uint16_t>(score.ppq);
  file.tracks.push_back(assemble_track(score, options));
  return file;
}

std::string to_score(const SmfFile& file) {
  const auto timeline = merged_timeline(file);
  const auto spans = to_note_spans(timeline, SpanMode::poly);
  const std::uint64_t whole = 4ULL * file.division_ppq;

  std::ostringstream out;
  out << "# reconstructed from a format " << file.format << " file with " << file.tracks.size() << " track(s)\n";
  if (spans.empty()) out << "# error: no voices, the input contains no notes\n";
  out << "ppq " << file.division_ppq << "\n";

  std::optional<SetTempo> tempo;
  std::optional<TimeSignature> timesig;
  std::optional<KeySignature> keysig;
  std::map<std::uint8_t, std::uint8_t> programs;  // channel -> first program
  bool uses_note_off = false;
  for (const auto& [tick, m] : timeline) {
    if (const auto* t = std::get_if<SetTempo>(&m); t && !tempo) tempo = *t;
    if (const auto* t = std::get_if<TimeSignature>(&m); t && !timesig) timesig = *t;
    if (const auto* k = std::get_if<KeySignature>(&m); k && !keysig) keysig = *k;
    if (const auto* p = std::get_if<ProgramChange>(&m)) programs.try_emplace(p->channel.index(), p->program);
    if (std::holds_alternative<NoteOff>(m)) uses_note_off = true;
  }
  if (timesig && timesig->denominator_pow2 < 31) {
    out << "timesig " << int(timesig->numerator) << "/" << (1u << timesig->denominator_pow2) << " "
        << int(timesig->clocks_per_click) << " " << int(timesig->thirty_seconds_per_quarter) << "\n";
  }
  if (keysig) out << "keysig " << int(keysig->sharps_flats) << (keysig->mode ? " minor" : " major") << "\n";
  if (tempo && tempo->microseconds_per_quarter > 0) {
    out << "tempo " << format_bpm(tempo_to_bpm(tempo->microseconds_per_quarter)) << "\n";
  }
  if (uses_note_off) out << "noteoff off\n";

  // Notes that share channel, start, end and velocity form a chord.
  struct Group {
    Channel channel;
    AbsTicks on, off;
    std::uint8_t velocity;
    std::vector<std::uint8_t> pitches;
  };
  std::vector<Group> groups;
  for (const auto& s : spans) {
    if (s.off_tick == s.on_tick) continue;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.channel == s.channel && g.on == s.on_tick && g.off == s.off_tick && g.velocity == s.velocity &&
             std::find(g.pitches.begin(), g.pitches.end(), s.pitch) == g.pitches.end();
    });
    if (it == groups.end()) {
      groups.push_back({s.channel, s.on_tick, s.off_tick, s.velocity, {s.pitch}});
    } else {
      it->pitches.push_back(s.pitch);
    }
  }

  struct VoiceOut {
    Channel channel;
    AbsTicks end = 0;
    std::vector<std::string> items;
  };
  std::vector<VoiceOut> voices;
  for (const auto& g : groups) {
    auto it = std::find_if(voices.begin(), voices.end(),
                           [&](const VoiceOut& v) { return v.channel == g.channel && v.end <= g.on; });
    if (it == voices.end()) {
      voices.push_back({g.channel, 0, {}});
      it = voices.end() - 1;
    }
    if (g.on > it->end) it->items.push_back("R " + format_ratio(g.on - it->end, whole));
    std::string names;
    for (auto p : g.pitches) {
      if (!names.empty()) names += '+';
      names += format_pitch_name(pitch_to_name(p));
    }
    it->items.push_back(names + " " + format_ratio(g.off - g.on, whole) + " v" + std::to_string(g.velocity));
    it->end = g.off;
  }
  std::stable_sort(voices.begin(), voices.end(),
                   [](const VoiceOut& a, const VoiceOut& b) { return a.channel < b.channel; });

  std::map<std::uint8_t, bool> bound;
  for (const auto& v : voices) {
    out << "\nvoice ch" << v.channel.number();
    auto p = programs.find(v.channel.index());
    if (p != programs.end() && !bound[v.channel.index()]) {
      out << " program " << int(p->second);
      bound[v.channel.index()] = true;
    }
    out << ":\n";
    for (const auto& item : v.items) out << "  " << item << "\n";
  }
  for (const auto& [channel, program] : programs) {
    if (!bound[channel]) out << "# program " << int(program) << " on channel " << channel + 1 << " has no notes\n";
  }
  return out.str();
}

}  // namespace smfkit
