#include "cli_app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "smfkit/hex.hpp"
#include "smfkit/notegram.hpp"
#include "smfkit/score.hpp"
#include "smfkit/smf.hpp"

namespace smfkit::cli {
namespace {

struct Config {
  std::string input = "-";
  std::string output = "-";
  bool hex = false;
  std::uint32_t ppq = kDefaultPpq;
  std::string noteoff_style;  // empty: not given
  bool strict = false;
  bool running_status = false;
  std::string mode = "poly";
  std::string color_by = "pitch";
  std::uint32_t ticks_per_unit = 1;
  std::uint32_t row_height = 12;
};

// Usage and IO problems; reported like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_all(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

void write_all(const std::string& path, const std::string& data, std::ostream& out) {
  if (path == "-") {
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file.write(data.data(), static_cast<std::streamsize>(data.size()));
}

ByteView as_bytes(const std::string& s) { return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}; }

std::optional<NoteOffStyle> style_flag(const Config& cfg) {
  if (cfg.noteoff_style.empty()) return std::nullopt;
  return cfg.noteoff_style == "off" ? NoteOffStyle::off : NoteOffStyle::on0;
}

// SMF binary, or a headerless hex listing with --hex.
SmfFile load(const Config& cfg, std::istream& in, Diagnostics& warnings) {
  const auto raw = read_all(cfg.input, in);
  const ParseOptions options{cfg.strict};
  if (cfg.hex) {
    const auto bytes = parse_hex_tokens(raw);
    SmfFile file;
    file.division_ppq = static_cast<std::uint16_t>(cfg.ppq);
    file.tracks.push_back(parse_event_stream(bytes, options, &warnings));
    return file;
  }
  if (!looks_like_smf(as_bytes(raw))) {
    throw Error(Errc::bad_magic, "input is not a Standard MIDI File (use --hex for hex listings)", 0);
  }
  return parse_smf(as_bytes(raw), options, &warnings);
}

void print_warnings(const Diagnostics& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w.to_string() << "\n";
}

std::string seconds_text(double seconds) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << seconds;
  auto s = os.str();
  while (s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string bpm_text(std::uint32_t us) {
  std::ostringstream os;
  os << std::setprecision(6) << tempo_to_bpm(us);
  return os.str();
}

int cmd_disasm(const Config& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  Diagnostics warnings;
  const auto file = load(cfg, in, warnings);
  std::string text;
  if (!cfg.hex) {
    text += "# format " + std::to_string(file.format) + ", ppq " + std::to_string(file.division_ppq) + ", " +
            std::to_string(file.tracks.size()) + " track(s)\n";
  }
  for (std::size_t i = 0; i < file.tracks.size(); ++i) {
    if (!cfg.hex) text += "# track " + std::to_string(i + 1) + "\n";
    text += disassemble(file.tracks[i], file.division_ppq);
  }
  print_warnings(warnings, err);
  write_all(cfg.output, text, out);
  return kOk;
}

int cmd_asm(const Config& cfg, std::istream& in, std::ostream& out, std::ostream&) {
  const auto score = parse_score(read_all(cfg.input, in));
  AssembleOptions options;
  options.noteoff_style = style_flag(cfg);
  const auto file = assemble(score, options);
  std::string data;
  if (cfg.hex) {
    for (const auto& e : file.tracks.front().events) {
      data += format_hex(encode_vlv(e.delta).view()) + " " + format_hex(encode_message(e.message)) + "\n";
    }
  } else {
    const auto bytes = write_smf(file, {cfg.running_status, NoteOffStyle::preserve});
    data.assign(bytes.begin(), bytes.end());
  }
  write_all(cfg.output, data, out);
  return kOk;
}

int cmd_info(const Config& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  Diagnostics warnings;
  const auto file = load(cfg, in, warnings);
  std::size_t events = 0;
  for (const auto& t : file.tracks) events += t.events.size();
  const auto timeline = merged_timeline(file);
  std::vector<std::uint32_t> tempos;
  for (const auto& [tick, m] : timeline) {
    if (const auto* t = std::get_if<SetTempo>(&m)) tempos.push_back(t->microseconds_per_quarter);
  }
  const auto spans = to_note_spans(timeline, SpanMode::poly);

  std::ostringstream os;
  os << "format: " << file.format << "\n";
  os << "ppq: " << file.division_ppq << "\n";
  os << "tracks: " << file.tracks.size() << "\n";
  os << "events: " << events << "\n";
  if (tempos.empty()) {
    os << "tempo: " << bpm_text(kDefaultTempo) << " bpm (" << kDefaultTempo << " us per quarter, default)\n";
  } else {
    os << "tempo: " << bpm_text(tempos.front()) << " bpm (" << tempos.front() << " us per quarter)";
    if (tempos.size() > 1) os << ", " << tempos.size() - 1 << " later change(s)";
    os << "\n";
  }
  os << "note spans: " << spans.size() << "\n";
  os << "duration: " << duration_ticks(file) << " ticks, " << seconds_text(duration_seconds(file)) << " s\n";
  print_warnings(warnings, err);
  write_all(cfg.output, os.str(), out);
  return kOk;
}

int cmd_notegram(const Config& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  Diagnostics warnings;
  const auto file = load(cfg, in, warnings);
  const auto spans = to_note_spans(merged_timeline(file), cfg.mode == "mono" ? SpanMode::mono : SpanMode::poly,
                                   &warnings);
  NotegramLayout layout;
  layout.ticks_per_unit = cfg.ticks_per_unit;
  layout.pitch_row_height = cfg.row_height;
  layout.grid_ticks = file.division_ppq;
  layout.color_by = cfg.color_by == "channel" ? ColorBy::channel : ColorBy::pitch;
  const auto svg = render_notegram(spans, layout);
  print_warnings(warnings, err);
  write_all(cfg.output, svg, out);
  return kOk;
}

int cmd_check(const Config& cfg, std::istream& in, std::ostream& out, std::ostream&) {
  const auto raw = read_all(cfg.input, in);
  std::vector<Finding> findings;
  if (cfg.hex) {
    findings = check_event_stream(parse_hex_tokens(raw));
  } else {
    findings = check_smf(as_bytes(raw));
  }
  std::size_t errors = 0;
  std::size_t warnings = 0;
  std::string report;
  for (const auto& f : findings) {
    (f.severity == Severity::error ? errors : warnings)++;
    report += f.to_string() + "\n";
  }
  if (findings.empty()) {
    report += "clean\n";
  } else {
    report += std::to_string(errors) + " error(s), " + std::to_string(warnings) + " warning(s)\n";
  }
  write_all(cfg.output, report, out);
  return errors > 0 || (cfg.strict && warnings > 0) ? kFindings : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Standard MIDI File assembler, disassembler and inspector", "smfkit"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub, bool reads_events) {
    sub->add_option("input", cfg.input, "Input path, or - for stdin")->capture_default_str();
    sub->add_option("-o,--output", cfg.output, "Output path, or - for stdout")->capture_default_str();
    sub->add_flag("--hex", cfg.hex,
                  reads_events ? "Input is a headerless hex listing" : "Emit a headerless hex listing");
    sub->add_option("--ppq", cfg.ppq, "Ticks per quarter note for headerless input")
        ->check(CLI::Range(1, 32767))
        ->capture_default_str();
    sub->add_flag("--strict", cfg.strict, "Treat warnings as errors");
  };

  auto* disasm = app.add_subcommand("disasm", "Print an annotated event listing");
  add_common(disasm, true);
  auto* asm_cmd = app.add_subcommand("asm", "Assemble a score into a MIDI file");
  add_common(asm_cmd, false);
  asm_cmd->add_option("--noteoff-style", cfg.noteoff_style, "How note ends are written")
      ->check(CLI::IsMember({"on0", "off"}));
  asm_cmd->add_flag("--running-status", cfg.running_status, "Omit repeated status bytes in SMF output");
  auto* info = app.add_subcommand("info", "Summarise a MIDI file");
  add_common(info, true);
  auto* notegram = app.add_subcommand("notegram", "Render a piano-roll SVG");
  add_common(notegram, true);
  notegram->add_option("--mode", cfg.mode, "Note pairing mode")->check(CLI::IsMember({"mono", "poly"}));
  notegram->add_option("--color-by", cfg.color_by, "Rectangle colouring")
      ->check(CLI::IsMember({"pitch", "channel"}));
  notegram->add_option("--ticks-per-unit", cfg.ticks_per_unit, "Ticks per SVG unit")->check(CLI::PositiveNumber);
  notegram->add_option("--row-height", cfg.row_height, "Pitch row height")->check(CLI::PositiveNumber);
  auto* check = app.add_subcommand("check", "Validate an event stream or MIDI file");
  add_common(check, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (disasm->parsed()) return cmd_disasm(cfg, in, out, err);
    if (asm_cmd->parsed()) return cmd_asm(cfg, in, out, err);
    if (info->parsed()) return cmd_info(cfg, in, out, err);
    if (notegram->parsed()) return cmd_notegram(cfg, in, out, err);
    if (check->parsed()) return cmd_check(cfg, in, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace smfkit::cli
