#include "smfkit/notegram.hpp"

#include <algorithm>
#include <array>

#include "smfkit/theory.hpp"

namespace smfkit {
namespace {

// Fixed-point text for num/den with up to three decimals, exact integers
// printed without a fraction. Rounds half up.
std::string decimal(std::uint64_t num, std::uint64_t den) {
  const std::uint64_t milli = (num * 2000 + den) / (2 * den);
  std::string out = std::to_string(milli / 1000);
  auto frac = milli % 1000;
  if (frac) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 3 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

constexpr std::array<const char*, 12> kPitchClassColors = {
    "#9b59b6", "#8e44ad", "#2980b9", "#3498db", "#1abc9c", "#16a085",
    "#27ae60", "#f39c12", "#e67e22", "#6b8e23", "#c0392b", "#e74c3c"};

constexpr std::array<const char*, 16> kChannelColors = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd"};

}  // namespace

void NotegramLayout::validate() const {
  if (ticks_per_unit == 0) throw Error(Errc::range, "ticks per unit must be positive");
  if (pitch_row_height == 0) throw Error(Errc::range, "pitch row height must be positive");
  if (grid_ticks == 0) throw Error(Errc::range, "grid spacing must be positive");
}

std::string render_notegram(std::span<const NoteSpan> spans, const NotegramLayout& layout) {
  layout.validate();

  int low = 60;
  int high = 71;
  AbsTicks end_tick = 0;
  if (!spans.empty()) {
    low = 127;
    high = 0;
    for (const auto& s : spans) {
      low = std::min<int>(low, s.pitch);
      high = std::max<int>(high, s.pitch);
      end_tick = std::max(end_tick, s.off_tick);
    }
  }
  low = std::max(0, low - static_cast<int>(layout.pitch_padding));
  high = std::min(127, high + static_cast<int>(layout.pitch_padding));
  // Time axis always shows at least one grid cell.
  end_tick = std::max<AbsTicks>(end_tick, layout.grid_ticks);
  end_tick = (end_tick + layout.grid_ticks - 1) / layout.grid_ticks * layout.grid_ticks;

  const std::uint64_t tpu = layout.ticks_per_unit;
  const std::uint64_t rows = static_cast<std::uint64_t>(high - low + 1);
  const std::uint64_t plot_height = rows * layout.pitch_row_height;
  const std::uint64_t left = layout.margin_left;
  const std::uint64_t top = layout.margin_top;
  // Everything in SVG units times tpu, divided on output, so x positions and
  // widths keep exact tick ratios until the final rounding.
  const auto x = [&](AbsTicks tick) { return decimal(left * tpu + tick, tpu); };
  const auto row_y = [&](int pitch) {
    return std::to_string(top + static_cast<std::uint64_t>(high - pitch) * layout.pitch_row_height);
  };
  const auto plot_right = x(end_tick);
  const auto total_width = decimal((left + layout.margin_right) * tpu + end_tick, tpu);
  const auto total_height = std::to_string(top + plot_height + layout.margin_bottom);
  const auto axis_y = std::to_string(top + plot_height);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + total_width + "\" height=\"" +
         total_height + "\" viewBox=\"0 0 " + total_width + " " + total_height + "\">\n";

  svg += "  <g class=\"axes\" stroke=\"#cccccc\" stroke-width=\"0.5\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(std::max<std::uint32_t>(6, layout.pitch_row_height * 3 / 4)) + "\">\n";
  for (int p = high; p >= low; --p) {
    const auto y = row_y(p);
    svg += "    <line x1=\"" + x(0) + "\" y1=\"" + y + "\" x2=\"" + plot_right + "\" y2=\"" + y + "\"/>\n";
    const auto baseline = std::to_string(top + static_cast<std::uint64_t>(high - p + 1) * layout.pitch_row_height - 2);
    svg += "    <text x=\"" + std::to_string(left >= 4 ? left - 4 : 0) + "\" y=\"" + baseline +
           "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333333\">" + format_pitch_name(pitch_to_name(p)) +
           "</text>\n";
  }
  for (AbsTicks t = 0; t <= end_tick; t += layout.grid_ticks) {
    const auto gx = x(t);
    svg += "    <line x1=\"" + gx + "\" y1=\"" + std::to_string(top) + "\" x2=\"" + gx + "\" y2=\"" + axis_y +
           "\"/>\n";
    svg += "    <text x=\"" + gx + "\" y=\"" + std::to_string(top + plot_height + 14) +
           "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333333\">" + std::to_string(t) + "</text>\n";
  }
  svg += "    <line x1=\"" + x(0) + "\" y1=\"" + axis_y + "\" x2=\"" + plot_right + "\" y2=\"" + axis_y +
         "\" stroke=\"#333333\"/>\n";
  svg += "  </g>\n";

  svg += "  <g class=\"notes\" stroke=\"#222222\" stroke-width=\"0.5\">\n";
  for (const auto& s : spans) {
    const char* color = layout.color_by == ColorBy::pitch ? kPitchClassColors[s.pitch % 12]
                                                          : kChannelColors[s.channel.index()];
    svg += "    <rect x=\"" + x(s.on_tick) + "\" y=\"" + row_y(s.pitch) + "\" width=\"" +
           decimal(s.off_tick - s.on_tick, tpu) + "\" height=\"" + std::to_string(layout.pitch_row_height) +
           "\" fill=\"" + color + "\"><title>" + format_pitch_name(pitch_to_name(s.pitch)) + " ch" +
           std::to_string(s.channel.number()) + " " + std::to_string(s.on_tick) + "-" +
           std::to_string(s.off_tick) + "</title></rect>\n";
  }
  svg += "  </g>\n</svg>\n";
  return svg;
}

}  // namespace smfkit
