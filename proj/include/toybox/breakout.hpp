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

#ifndef TOYBOX_BREAKOUT_HPP_
#define TOYBOX_BREAKOUT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toybox/config.hpp"
#include "toybox/errors.hpp"

namespace toybox {

enum class Action : std::uint8_t { Noop = 0, Fire = 1, Left = 2, Right = 3 };

inline constexpr std::array<Action, 4> kAllActions = {
    Action::Noop, Action::Fire, Action::Left, Action::Right};

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::Noop: return "Noop";
    case Action::Fire: return "Fire";
    case Action::Left: return "Left";
    case Action::Right: return "Right";
  }
  return "?";
}

inline std::optional<Action> parse_action(std::string_view name) {
  for (Action a : kAllActions) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

// Index mapping used across language boundaries: 0..3 = Noop, Fire, Left,
// Right.
inline Action action_from_index(int index) {
  if (index < 0 || index >= static_cast<int>(kAllActions.size())) {
    throw FieldError("action", "index " + std::to_string(index) +
                                   " outside [0, 4)");
  }
  return kAllActions[index];
}

// LifeLost and LevelCleared hold for the single frame on which they occur;
// the next step_frame resolves them (serve pending / next wall loaded).
// GameWon and GameOver are terminal.
enum class Lifecycle : std::uint8_t {
  Playing,
  LifeLost,
  LevelCleared,
  GameWon,
  GameOver
};

inline std::string_view to_string(Lifecycle l) {
  switch (l) {
    case Lifecycle::Playing: return "Playing";
    case Lifecycle::LifeLost: return "LifeLost";
    case Lifecycle::LevelCleared: return "LevelCleared";
    case Lifecycle::GameWon: return "GameWon";
    case Lifecycle::GameOver: return "GameOver";
  }
  return "?";
}

inline std::optional<Lifecycle> parse_lifecycle(std::string_view name) {
  for (Lifecycle l : {Lifecycle::Playing, Lifecycle::LifeLost,
                      Lifecycle::LevelCleared, Lifecycle::GameWon,
                      Lifecycle::GameOver}) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

inline bool is_terminal(Lifecycle l) {
  return l == Lifecycle::GameWon || l == Lifecycle::GameOver;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Complete mutable world state. ball_pos is the center of the square ball;
// paddle_x is the center of the paddle. Real-valued fields always sit on the
// 1e-9 grid so that their decimal export is exact.
struct GameState {
  std::int64_t frame = 0;
  std::int64_t score = 0;
  int lives_remaining = 0;
  int level = 1;
  // Row-major, grid_rows x grid_cols, 1 = alive.
  std::vector<std::uint8_t> bricks_alive;
  Vec2 ball_pos;
  Vec2 ball_vel;
  bool ball_in_play = false;
  double paddle_x = 0.0;
  bool paddle_shrunk = false;
  int ball_hit_count = 0;
  std::uint64_t rng_state = 0;
  Lifecycle lifecycle = Lifecycle::Playing;

  int live_brick_count() const {
    return static_cast<int>(
        std::count(bricks_alive.begin(), bricks_alive.end(), 1));
  }

  friend bool operator==(const GameState&, const GameState&) = default;
};

enum class EventKind : std::uint8_t {
  BrickHit,
  PaddleHit,
  WallHit,
  CeilingHit,
  LifeLost,
  LevelCleared,
  GameWon
};

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::BrickHit: return "BrickHit";
    case EventKind::PaddleHit: return "PaddleHit";
    case EventKind::WallHit: return "WallHit";
    case EventKind::CeilingHit: return "CeilingHit";
    case EventKind::LifeLost: return "LifeLost";
    case EventKind::LevelCleared: return "LevelCleared";
    case EventKind::GameWon: return "GameWon";
  }
  return "?";
}

struct Event {
  EventKind kind = EventKind::BrickHit;
  // Only meaningful for BrickHit.
  int row = -1;
  int col = -1;

  friend bool operator==(const Event&, const Event&) = default;
};

struct StepOutcome {
  int score_delta = 0;
  std::vector<Event> events;
  Lifecycle lifecycle = Lifecycle::Playing;

  bool has(EventKind kind) const {
    return std::any_of(events.begin(), events.end(),
                       [kind](const Event& e) { return e.kind == kind; });
  }
};

namespace detail {

inline constexpr double kGrid = 1e9;
// Distance below which a ball is treated as touching a surface rather than
// embedded in it.
inline constexpr double kTouch = 1e-6;
inline constexpr int kMaxContactsPerFrame = 16;

inline double snap(double v) {
  const double r = std::round(v * kGrid) / kGrid;
  return r == 0.0 ? 0.0 : r;
}

inline Vec2 snap(Vec2 v) { return {snap(v.x), snap(v.y)}; }

// SplitMix64.
inline std::uint64_t next_random(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double radians(double degrees) {
  return degrees * std::numbers::pi / 180.0;
}

}  // namespace detail

inline double paddle_half_width(const GameConfig& c, const GameState& s) {
  return (s.paddle_shrunk ? c.paddle_width / 2.0 : c.paddle_width) / 2.0;
}

// Legal range of paddle_x given the current paddle width.
inline std::pair<double, double> paddle_range(const GameConfig& c,
                                              const GameState& s) {
  const double half = paddle_half_width(c, s);
  return {c.interior_left() + half, c.interior_right() - half};
}

inline int brick_index(const GameConfig& c, int row, int col) {
  return row * c.grid_cols + col;
}

inline GameState new_game(const GameConfig& c) {
  validate(c);
  GameState s;
  s.lives_remaining = c.lives;
  s.bricks_alive.assign(c.brick_count(), 1);
  s.paddle_x = detail::snap(c.field_width / 2.0);
  s.ball_pos = {s.paddle_x, static_cast<double>(c.serve_y)};
  s.rng_state = c.rng_seed;
  return s;
}

// Outgoing direction, in degrees clockwise from straight up, of a ball that
// meets the paddle `hit_offset` units right of its center. Linear in the
// offset and clamped to +-60 at the paddle edges.
inline double paddle_bounce_angle(double hit_offset, double paddle_half_width) {
  constexpr double kMaxDeflection = 60.0;
  if (!(paddle_half_width > 0)) {
    throw FieldError("paddle_half_width", "must be positive");
  }
  if (std::abs(hit_offset) > paddle_half_width) {
    throw FieldError("hit_offset", "lies beyond the paddle edge");
  }
  return kMaxDeflection * hit_offset / paddle_half_width;
}

namespace detail {

enum class Surface : std::uint8_t {
  Brick,
  LeftWall,
  RightWall,
  Ceiling,
  Paddle,
  Floor
};

struct Contact {
  double time = std::numeric_limits<double>::infinity();
  Surface surface = Surface::Floor;
  int row = 0;
  int col = 0;
  bool side_face = false;  // brick entered through a vertical face
};

// Earliest time first; exact ties go to bricks (lowest row, then column),
// then walls, ceiling, paddle, floor.
inline bool precedes(const Contact& a, const Contact& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.surface != b.surface) return a.surface < b.surface;
  if (a.row != b.row) return a.row < b.row;
  return a.col < b.col;
}

struct Box {
  double left, top, right, bottom;
};

// Swept test of `ball` moving at `v` against a static box. Returns the entry
// time within [0, horizon] and whether the entry face is vertical.
inline std::optional<std::pair<double, bool>> sweep(const Box& ball, Vec2 v,
                                                    const Box& target,
                                                    double horizon) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto axis = [](double lo, double hi, double tlo, double thi, double vel,
                 double& entry, double& exit) {
    if (vel > 0) {
      entry = (tlo - hi) / vel;
      exit = (thi - lo) / vel;
    } else if (vel < 0) {
      entry = (thi - lo) / vel;
      exit = (tlo - hi) / vel;
    } else {
      if (hi <= tlo || lo >= thi) return false;
      entry = -kInf;
      exit = kInf;
    }
    return true;
  };
  double ex, xx, ey, xy;
  if (!axis(ball.left, ball.right, target.left, target.right, v.x, ex, xx)) {
    return std::nullopt;
  }
  if (!axis(ball.top, ball.bottom, target.top, target.bottom, v.y, ey, xy)) {
    return std::nullopt;
  }
  double entry = std::max(ex, ey);
  const double exit = std::min(xx, xy);
  if (exit <= 0 || entry >= exit || entry > horizon) return std::nullopt;
  const bool side_face = ex > ey;
  if (entry < 0) {
    // Tolerate residue from grid snapping; anything deeper is embedded.
    const double speed = std::abs(side_face ? v.x : v.y);
    if (entry == -kInf || -entry * speed > kTouch) return std::nullopt;
    entry = 0;
  }
  return std::make_pair(entry, side_face);
}

inline Box brick_box(const GameConfig& c, int row, int col) {
  const double w = c.brick_width();
  const double left = c.interior_left() + col * w;
  const double top = c.brick_top_y + row * c.brick_height;
  return {left, top, left + w, top + c.brick_height};
}

inline void find_brick_contact(const GameConfig& c, const GameState& s,
                               const Box& ball, double horizon,
                               Contact& best) {
  const Vec2 v = s.ball_vel;
  const double x0 = std::min(ball.left, ball.left + v.x * horizon);
  const double x1 = std::max(ball.right, ball.right + v.x * horizon);
  const double y0 = std::min(ball.top, ball.top + v.y * horizon);
  const double y1 = std::max(ball.bottom, ball.bottom + v.y * horizon);
  if (y1 < c.brick_top_y || y0 > c.brick_bottom_y()) return;
  const double w = c.brick_width();
  auto clamp_index = [](double v, int n) {
    return static_cast<int>(std::clamp(std::floor(v), 0.0, n - 1.0));
  };
  const int r0 = clamp_index((y0 - c.brick_top_y) / c.brick_height - 1,
                             c.grid_rows);
  const int r1 = clamp_index((y1 - c.brick_top_y) / c.brick_height + 1,
                             c.grid_rows);
  const int c0 = clamp_index((x0 - c.interior_left()) / w - 1, c.grid_cols);
  const int c1 = clamp_index((x1 - c.interior_left()) / w + 1, c.grid_cols);
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      if (!s.bricks_alive[brick_index(c, row, col)]) continue;
      auto hit = sweep(ball, v, brick_box(c, row, col), horizon);
      if (!hit) continue;
      Contact candidate{hit->first, Surface::Brick, row, col, hit->second};
      if (precedes(candidate, best)) best = candidate;
    }
  }
}

inline Contact find_contact(const GameConfig& c, const GameState& s,
                            double horizon) {
  const double h = c.ball_size / 2.0;
  const Vec2 p = s.ball_pos;
  const Vec2 v = s.ball_vel;
  Contact best;
  auto consider = [&](double distance, double speed, Surface surface) {
    Contact candidate{std::max(0.0, distance) / speed, surface};
    if (candidate.time <= horizon && precedes(candidate, best)) {
      best = candidate;
    }
  };
  if (v.x < 0) consider(p.x - h - c.interior_left(), -v.x, Surface::LeftWall);
  if (v.x > 0) consider(c.interior_right() - (p.x + h), v.x, Surface::RightWall);
  if (v.y < 0) consider(p.y - h - c.ceiling_y, -v.y, Surface::Ceiling);
  if (v.y > 0) {
    if (p.y + h <= c.paddle_y + kTouch) {
      const double t = std::max(0.0, c.paddle_y - (p.y + h)) / v.y;
      const double bx = p.x + v.x * t;
      if (std::abs(bx - s.paddle_x) <= paddle_half_width(c, s) + h) {
        consider(c.paddle_y - (p.y + h), v.y, Surface::Paddle);
      }
    }
    consider(c.field_height - (p.y + h), v.y, Surface::Floor);
  }
  const Box ball{p.x - h, p.y - h, p.x + h, p.y + h};
  find_brick_contact(c, s, ball, horizon, best);
  return best;
}

inline void set_speed(GameState& s, double speed) {
  const double n = norm(s.ball_vel);
  if (n > 0) {
    s.ball_vel = snap(Vec2{s.ball_vel.x * speed / n, s.ball_vel.y * speed / n});
  }
}

// Counts a paddle/wall/ceiling contact and applies any speedup it unlocks.
inline void count_hit(const GameConfig& c, GameState& s) {
  const double before = speed_multiplier(c, s.ball_hit_count);
  ++s.ball_hit_count;
  if (speed_multiplier(c, s.ball_hit_count) != before) {
    set_speed(s, scheduled_speed(c, s.ball_hit_count));
  }
}

// Restores the full-width paddle, keeping it inside the walls.
inline void unshrink_paddle(const GameConfig& c, GameState& s) {
  s.paddle_shrunk = false;
  const auto [lo, hi] = paddle_range(c, s);
  s.paddle_x = snap(std::clamp(s.paddle_x, lo, hi));
}

inline void park_ball(const GameConfig& c, GameState& s) {
  s.ball_in_play = false;
  s.ball_pos = {s.paddle_x, static_cast<double>(c.serve_y)};
  s.ball_vel = {};
}

inline void serve(const GameConfig& c, GameState& s) {
  const bool rightward = (next_random(s.rng_state) >> 63) != 0;
  const double angle = radians(c.default_launch_angle_deg);
  const double speed = scheduled_speed(c, s.ball_hit_count);
  s.ball_pos = {s.paddle_x, static_cast<double>(c.serve_y)};
  s.ball_vel = snap(Vec2{(rightward ? 1.0 : -1.0) * speed * std::cos(angle),
                         speed * std::sin(angle)});
  s.ball_in_play = true;
}

inline void resolve(const GameConfig& c, GameState& s, const Contact& hit,
                    StepOutcome& out) {
  switch (hit.surface) {
    case Surface::LeftWall:
    case Surface::RightWall:
      s.ball_vel.x = -s.ball_vel.x;
      out.events.push_back({EventKind::WallHit});
      count_hit(c, s);
      break;
    case Surface::Ceiling:
      s.ball_vel.y = -s.ball_vel.y;
      out.events.push_back({EventKind::CeilingHit});
      if (c.shrink_paddle_on_ceiling) s.paddle_shrunk = true;
      count_hit(c, s);
      break;
    case Surface::Paddle: {
      const double half = paddle_half_width(c, s);
      const double offset =
          std::clamp(s.ball_pos.x - s.paddle_x, -half, half);
      const double angle = radians(paddle_bounce_angle(offset, half));
      ++s.ball_hit_count;
      const double speed = scheduled_speed(c, s.ball_hit_count);
      s.ball_vel = snap(Vec2{speed * std::sin(angle), -speed * std::cos(angle)});
      out.events.push_back({EventKind::PaddleHit});
      break;
    }
    case Surface::Floor:
      --s.lives_remaining;
      s.ball_hit_count = 0;
      unshrink_paddle(c, s);
      park_ball(c, s);
      out.events.push_back({EventKind::LifeLost});
      s.lifecycle =
          s.lives_remaining > 0 ? Lifecycle::LifeLost : Lifecycle::GameOver;
      break;
    case Surface::Brick: {
      s.bricks_alive[brick_index(c, hit.row, hit.col)] = 0;
      const int points = c.row_points[hit.row];
      s.score += points;
      out.score_delta += points;
      out.events.push_back({EventKind::BrickHit, hit.row, hit.col});
      if (hit.side_face) {
        s.ball_vel.x = -s.ball_vel.x;
      } else {
        s.ball_vel.y = -s.ball_vel.y;
      }
      if (s.live_brick_count() == 0) {
        park_ball(c, s);
        out.events.push_back({EventKind::LevelCleared});
        if (s.level >= c.levels_to_win) {
          out.events.push_back({EventKind::GameWon});
          s.lifecycle = Lifecycle::GameWon;
        } else {
          s.lifecycle = Lifecycle::LevelCleared;
        }
      }
      break;
    }
  }
}

inline void advance_ball(const GameConfig& c, GameState& s, StepOutcome& out) {
  double remaining = 1.0;
  for (int i = 0; i < kMaxContactsPerFrame && remaining > 0; ++i) {
    const Contact hit = find_contact(c, s, remaining);
    if (hit.time > remaining) break;
    s.ball_pos.x += s.ball_vel.x * hit.time;
    s.ball_pos.y += s.ball_vel.y * hit.time;
    remaining -= hit.time;
    resolve(c, s, hit, out);
    if (!s.ball_in_play) return;
  }
  if (remaining > 0) {
    s.ball_pos.x += s.ball_vel.x * remaining;
    s.ball_pos.y += s.ball_vel.y * remaining;
  }
  s.ball_pos = snap(s.ball_pos);
}

}  // namespace detail

// Advances the game by one 1/60 s frame. Throws LifecycleError on a terminal
// state.
inline StepOutcome step_frame(const GameConfig& c, GameState& s,
                              Action action) {
  if (is_terminal(s.lifecycle)) {
    throw LifecycleError("step_frame: game is over (" +
                         std::string(to_string(s.lifecycle)) + ")");
  }
  if (s.lifecycle == Lifecycle::LevelCleared) {
    ++s.level;
    s.bricks_alive.assign(c.brick_count(), 1);
    s.ball_hit_count = 0;
    detail::unshrink_paddle(c, s);
  }
  s.lifecycle = Lifecycle::Playing;
  ++s.frame;

  StepOutcome out;
  const auto [lo, hi] = paddle_range(c, s);
  if (action == Action::Left) {
    s.paddle_x = detail::snap(std::max(lo, s.paddle_x - c.paddle_speed));
  } else if (action == Action::Right) {
    s.paddle_x = detail::snap(std::min(hi, s.paddle_x + c.paddle_speed));
  }
  if (action == Action::Fire && !s.ball_in_play) detail::serve(c, s);
  if (s.ball_in_play) detail::advance_ball(c, s, out);
  out.lifecycle = s.lifecycle;
  return out;
}

}  // namespace toybox

#endif  // TOYBOX_BREAKOUT_HPP_
