// Copyright 2026 The ToyBox Breakout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOYBOX_RENDER_HPP_
#define TOYBOX_RENDER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "toybox/breakout.hpp"
#include "toybox/config.hpp"

namespace toybox {

// 210 rows x 160 columns x RGB, row-major, 8 bits per channel. The logical
// playfield is scaled onto this raster whatever the configured field size.
struct Frame {
  static constexpr int kHeight = 210;
  static constexpr int kWidth = 160;
  static constexpr int kChannels = 3;

  std::vector<std::uint8_t> pixels =
      std::vector<std::uint8_t>(kHeight * kWidth * kChannels);

  std::span<const std::uint8_t> bytes() const { return pixels; }

  std::uint32_t rgb(int y, int x) const {
    const std::size_t i = (static_cast<std::size_t>(y) * kWidth + x) * kChannels;
    return (std::uint32_t{pixels[i]} << 16) | (std::uint32_t{pixels[i + 1]} << 8) |
           pixels[i + 2];
  }

  friend bool operator==(const Frame&, const Frame&) = default;
};

namespace detail {

// 5x7 digits, one 5-bit mask per row, most significant bit leftmost.
inline constexpr std::array<std::array<std::uint8_t, 7>, 10> kDigitFont = {{
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
}};

class Rasterizer {
 public:
  Rasterizer(Frame& frame, const GameConfig& c)
      : frame_(frame),
        sx_(static_cast<double>(Frame::kWidth) / c.field_width),
        sy_(static_cast<double>(Frame::kHeight) / c.field_height) {}

  void pixel(int x, int y, std::uint32_t rgb) {
    if (x < 0 || y < 0 || x >= Frame::kWidth || y >= Frame::kHeight) return;
    const std::size_t i =
        (static_cast<std::size_t>(y) * Frame::kWidth + x) * Frame::kChannels;
    frame_.pixels[i] = static_cast<std::uint8_t>(rgb >> 16);
    frame_.pixels[i + 1] = static_cast<std::uint8_t>(rgb >> 8);
    frame_.pixels[i + 2] = static_cast<std::uint8_t>(rgb);
  }

  // Fills the logical rectangle [x0, x1) x [y0, y1).
  void rect(double x0, double y0, double x1, double y1, std::uint32_t rgb) {
    const int px0 = std::max(0L, std::lround(x0 * sx_));
    const int px1 = std::min<long>(Frame::kWidth, std::lround(x1 * sx_));
    const int py0 = std::max(0L, std::lround(y0 * sy_));
    const int py1 = std::min<long>(Frame::kHeight, std::lround(y1 * sy_));
    for (int y = py0; y < py1; ++y) {
      for (int x = px0; x < px1; ++x) pixel(x, y, rgb);
    }
  }

  // Draws `value` in raster coordinates; returns the x just past the text.
  int number(std::int64_t value, int x, int y, std::uint32_t rgb) {
    const std::string digits = std::to_string(std::max<std::int64_t>(0, value));
    for (char d : digits) {
      const auto& glyph = kDigitFont[d - '0'];
      for (int row = 0; row < 7; ++row) {
        for (int col = 0; col < 5; ++col) {
          if (glyph[row] & (0x10 >> col)) pixel(x + col, y + row, rgb);
        }
      }
      x += 6;
    }
    return x;
  }

 private:
  Frame& frame_;
  double sx_;
  double sy_;
};

}  // namespace detail

inline Frame render_frame(const GameState& s, const GameConfig& c) {
  Frame frame;
  detail::Rasterizer r(frame, c);
  r.rect(0, 0, c.field_width, c.field_height, c.background_color);

  const double wall_top = std::max(0, c.ceiling_y - c.wall_width);
  r.rect(0, wall_top, c.field_width, c.ceiling_y, c.wall_color);
  r.rect(0, wall_top, c.interior_left(), c.paddle_y, c.wall_color);
  r.rect(c.interior_right(), wall_top, c.field_width, c.paddle_y,
         c.wall_color);

  for (int row = 0; row < c.grid_rows; ++row) {
    const std::uint32_t color = c.row_colors[row % c.row_colors.size()];
    for (int col = 0; col < c.grid_cols; ++col) {
      if (!s.bricks_alive[brick_index(c, row, col)]) continue;
      const detail::Box b = detail::brick_box(c, row, col);
      r.rect(b.left, b.top, b.right, b.bottom, color);
    }
  }

  const double half = paddle_half_width(c, s);
  r.rect(s.paddle_x - half, c.paddle_y, s.paddle_x + half,
         c.paddle_y + c.paddle_height, c.paddle_color);
  if (s.ball_in_play) {
    const double h = c.ball_size / 2.0;
    r.rect(s.ball_pos.x - h, s.ball_pos.y - h, s.ball_pos.x + h,
           s.ball_pos.y + h, c.ball_color);
  }

  r.number(s.score, 12, 4, c.text_color);
  r.number(s.lives_remaining, Frame::kWidth - 30, 4, c.text_color);
  r.number(s.level, Frame::kWidth - 12, 4, c.text_color);
  return frame;
}

// Binary PPM (P6) encoding of a frame.
inline std::string to_ppm(const Frame& frame) {
  std::string out = "P6\n" + std::to_string(Frame::kWidth) + " " +
                    std::to_string(Frame::kHeight) + "\n255\n";
  out.append(frame.pixels.begin(), frame.pixels.end());
  return out;
}

}  // namespace toybox

#endif  // TOYBOX_RENDER_HPP_
