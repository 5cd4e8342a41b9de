#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "smfkit/track.hpp"

namespace smfkit {

enum class ColorBy { pitch, channel };

struct NotegramLayout {
  // Horizontal scale: `ticks_per_unit` ticks map to one SVG user unit.
  std::uint32_t ticks_per_unit = 1;
  std::uint32_t pitch_row_height = 12;
  std::uint32_t margin_left = 56;
  std::uint32_t margin_top = 16;
  std::uint32_t margin_right = 16;
  std::uint32_t margin_bottom = 32;
  // Vertical grid line spacing in ticks, usually the file's ppq.
  std::uint32_t grid_ticks = 128;
  // Extra empty rows above and below the used pitch range.
  std::uint32_t pitch_padding = 1;
  ColorBy color_by = ColorBy::pitch;

  // Throws Errc::range if a scale is zero.
  void validate() const;
};

// Piano-roll document: one <rect> per span, x from on_tick, width from the
// span length, rows ordered high pitch to low; tick labels on the time axis
// and pitch names on the left. Output depends only on the inputs.
std::string render_notegram(std::span<const NoteSpan> spans, const NotegramLayout& layout = {});

}  // namespace smfkit
