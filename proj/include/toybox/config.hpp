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

#ifndef TOYBOX_CONFIG_HPP_
#define TOYBOX_CONFIG_HPP_

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "toybox/errors.hpp"

namespace toybox {

// Once the ball has made `hit_count` paddle/wall/ceiling contacts in the
// current life, its speed becomes ball_speed * multiplier.
struct SpeedStep {
  int hit_count = 0;
  double multiplier = 1.0;

  friend bool operator==(const SpeedStep&, const SpeedStep&) = default;
};

// Every tunable parameter of the game. Coordinates are logical units with
// the origin at the top-left corner and y growing downward. The playable
// interior is bounded by the side walls (wall_width thick), the ceiling at
// ceiling_y, and the open bottom edge at field_height.
struct GameConfig {
  int grid_cols = 18;
  int grid_rows = 6;
  // Brick value per row, top row first.
  std::vector<int> row_points = {7, 7, 4, 4, 1, 1};

  int field_width = 160;
  int field_height = 210;
  int wall_width = 8;
  int ceiling_y = 24;
  int brick_top_y = 57;
  int brick_height = 6;

  int paddle_width = 24;
  int paddle_height = 4;
  int paddle_y = 189;
  double paddle_speed = 4.0;
  bool shrink_paddle_on_ceiling = false;

  int ball_size = 2;
  double ball_speed = 2.0;
  std::vector<SpeedStep> speedup_schedule;
  // Serves leave (paddle_x, serve_y) heading down toward the paddle at this
  // angle below the horizontal.
  double default_launch_angle_deg = 60.0;
  int serve_y = 120;

  int lives = 5;
  int levels_to_win = 2;
  int frames_per_second = 60;
  std::uint64_t rng_seed = 0;

  // 0xRRGGBB. Brick row r uses row_colors[r % row_colors.size()].
  std::vector<std::uint32_t> row_colors = {0xC84848, 0xC66C3A, 0xB47A30,
                                           0xA2A22A, 0x48A048, 0x4248C8};
  std::uint32_t background_color = 0x000000;
  std::uint32_t wall_color = 0x8E8E8E;
  std::uint32_t paddle_color = 0xC84848;
  std::uint32_t ball_color = 0xC84848;
  std::uint32_t text_color = 0x8E8E8E;

  double interior_left() const { return wall_width; }
  double interior_right() const { return field_width - wall_width; }
  double brick_width() const {
    return static_cast<double>(field_width - 2 * wall_width) / grid_cols;
  }
  double brick_bottom_y() const {
    return brick_top_y + grid_rows * brick_height;
  }
  int brick_count() const { return grid_rows * grid_cols; }

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

// Throws FieldError naming the first offending field.
inline void validate(const GameConfig& c) {
  auto require = [](bool ok, const char* field, const char* message) {
    if (!ok) throw FieldError(std::string("config.") + field, message);
  };
  require(c.grid_cols > 0, "grid_cols", "must be positive");
  require(c.grid_rows > 0, "grid_rows", "must be positive");
  require(static_cast<int>(c.row_points.size()) == c.grid_rows, "row_points",
          "length must equal grid_rows");
  for (int p : c.row_points) {
    require(p >= 0, "row_points", "brick values must be non-negative");
  }
  require(c.field_width > 0, "field_width", "must be positive");
  require(c.field_height > 0, "field_height", "must be positive");
  require(c.wall_width > 0, "wall_width", "must be positive");
  require(c.brick_height > 0, "brick_height", "must be positive");
  require(c.paddle_width > 0, "paddle_width", "must be positive");
  require(c.paddle_height > 0, "paddle_height", "must be positive");
  require(c.paddle_y > 0, "paddle_y", "must be positive");
  require(c.paddle_speed > 0, "paddle_speed", "must be positive");
  require(c.ball_size > 0, "ball_size", "must be positive");
  require(c.ball_speed > 0, "ball_speed", "must be positive");
  require(c.ceiling_y > 0, "ceiling_y", "must be positive");
  require(c.serve_y > 0, "serve_y", "must be positive");
  require(2 * c.wall_width + c.paddle_width <= c.field_width, "paddle_width",
          "paddle must fit between the side walls");
  require(2 * c.wall_width + c.ball_size < c.field_width, "ball_size",
          "ball must fit between the side walls");
  require(c.ceiling_y + c.ball_size <= c.brick_top_y, "brick_top_y",
          "brick region must start below the ceiling");
  require(c.brick_bottom_y() + c.ball_size < c.serve_y, "serve_y",
          "serve point must lie below the brick region");
  require(c.serve_y + c.ball_size < c.paddle_y, "paddle_y",
          "paddle must lie below the serve point");
  require(c.paddle_y + c.paddle_height <= c.field_height, "paddle_height",
          "paddle must fit inside field_height");
  require(c.default_launch_angle_deg > 0 && c.default_launch_angle_deg < 90,
          "default_launch_angle_deg", "must be strictly between 0 and 90");
  int previous = -1;
  for (const SpeedStep& s : c.speedup_schedule) {
    require(s.hit_count > previous, "speedup_schedule",
            "hit counts must be non-negative and strictly increasing");
    require(s.multiplier > 0, "speedup_schedule",
            "multipliers must be positive");
    previous = s.hit_count;
  }
  require(c.lives > 0, "lives", "must be positive");
  require(c.levels_to_win > 0, "levels_to_win", "must be positive");
  require(c.frames_per_second == 60, "frames_per_second",
          "the time base is fixed at 60 Hz");
  require(!c.row_colors.empty(), "row_colors", "must not be empty");
}

// Points for destroying one brick in `row` (0 is the top row).
inline int brick_value(const GameConfig& c, int row) {
  if (row < 0 || row >= c.grid_rows) {
    throw FieldError("row", "out of range [0, " + std::to_string(c.grid_rows) +
                                ")");
  }
  return c.row_points[row];
}

inline int level_total_score(const GameConfig& c) {
  validate(c);
  return c.grid_cols * std::accumulate(c.row_points.begin(),
                                       c.row_points.end(), 0);
}

inline double speed_multiplier(const GameConfig& c, int hit_count) {
  double m = 1.0;
  for (const SpeedStep& s : c.speedup_schedule) {
    if (hit_count >= s.hit_count) m = s.multiplier;
  }
  return m;
}

inline double scheduled_speed(const GameConfig& c, int hit_count) {
  return c.ball_speed * speed_multiplier(c, hit_count);
}

}  // namespace toybox

#endif  // TOYBOX_CONFIG_HPP_
