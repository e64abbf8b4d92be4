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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "toybox/breakout.hpp"
#include "toybox/config.hpp"
#include "toybox/intervention.hpp"

namespace toybox {
namespace {

using testing::evolve;
using testing::evolve_mixed;
using testing::only_brick;

TEST(ConfigTest, DefaultsAreValid) { EXPECT_NO_THROW(validate(GameConfig{})); }

TEST(ConfigTest, RejectsRowPointsLengthMismatch) {
  GameConfig c;
  c.row_points = {7, 7, 4};
  try {
    validate(c);
    FAIL() << "expected FieldError";
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "config.row_points");
  }
}

TEST(ConfigTest, RejectsBricksBelowServePoint) {
  GameConfig c;
  c.brick_top_y = 110;
  EXPECT_THROW(validate(c), FieldError);
}

TEST(ConfigTest, RejectsNonSixtyHertz) {
  GameConfig c;
  c.frames_per_second = 30;
  EXPECT_THROW(validate(c), FieldError);
}

TEST(ConfigTest, RejectsUnsortedSpeedupSchedule) {
  GameConfig c;
  c.speedup_schedule = {{8, 1.5}, {4, 2.0}};
  EXPECT_THROW(validate(c), FieldError);
}

TEST(NewGameTest, DefaultConfig) {
  const GameState s = new_game(GameConfig{});
  EXPECT_EQ(s.live_brick_count(), 18 * 6);
  EXPECT_EQ(s.score, 0);
  EXPECT_EQ(s.lives_remaining, 5);
  EXPECT_EQ(s.level, 1);
  EXPECT_FALSE(s.ball_in_play);
  EXPECT_DOUBLE_EQ(s.paddle_x, 80.0);
  EXPECT_EQ(s.lifecycle, Lifecycle::Playing);
}

TEST(NewGameTest, DeterministicDocuments) {
  GameConfig c;
  c.rng_seed = 1234;
  EXPECT_EQ(export_text(new_game(c), c), export_text(new_game(c), c));
}

TEST(NewGameTest, RejectsInvalidConfig) {
  GameConfig c;
  c.lives = 0;
  EXPECT_THROW(new_game(c), FieldError);
}

TEST(BrickValueTest, RowValues) {
  const GameConfig c;
  EXPECT_EQ(brick_value(c, 0), 7);
  EXPECT_EQ(brick_value(c, 5), 1);
  EXPECT_THROW(brick_value(c, 6), FieldError);
  EXPECT_THROW(brick_value(c, -1), FieldError);
  int total = 0;
  for (int r = 0; r < c.grid_rows; ++r) {
    for (int k = 0; k < c.grid_cols; ++k) total += brick_value(c, r);
  }
  EXPECT_EQ(total, 432);
}

TEST(LevelTotalScoreTest, Values) {
  const GameConfig c;
  EXPECT_EQ(level_total_score(c), 432);
  EXPECT_EQ(c.levels_to_win * level_total_score(c), 864);

  GameConfig small;
  small.grid_rows = 1;
  small.grid_cols = 10;
  small.row_points = {1};
  EXPECT_EQ(level_total_score(small), 10);
}

TEST(PaddleBounceAngleTest, CenterAndEdges) {
  EXPECT_DOUBLE_EQ(paddle_bounce_angle(0, 12), 0.0);
  EXPECT_DOUBLE_EQ(paddle_bounce_angle(12, 12), 60.0);
  EXPECT_DOUBLE_EQ(paddle_bounce_angle(-12, 12), -60.0);
  EXPECT_THROW(paddle_bounce_angle(12.5, 12), FieldError);
}

TEST(PaddleBounceAngleTest, OddAndMonotone) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> offset(-12, 12);
  for (int i = 0; i < 1000; ++i) {
    const double a = offset(rng);
    const double b = offset(rng);
    EXPECT_DOUBLE_EQ(paddle_bounce_angle(-a, 12), -paddle_bounce_angle(a, 12));
    if (a < b) {
      EXPECT_LE(paddle_bounce_angle(a, 12), paddle_bounce_angle(b, 12));
    }
    EXPECT_LE(std::abs(paddle_bounce_angle(a, 12)), 60.0);
  }
}

GameState in_flight(const GameConfig& c, Vec2 pos, Vec2 vel) {
  GameState s = new_game(c);
  s.ball_pos = pos;
  s.ball_vel = vel;
  s.ball_in_play = true;
  return s;
}

TEST(StepFrameTest, FreeFlight) {
  const GameConfig c;
  GameState s = in_flight(c, {80, 150}, {1.2, -1.6});
  const StepOutcome out = step_frame(c, s, Action::Noop);
  EXPECT_DOUBLE_EQ(s.ball_pos.x, 81.2);
  EXPECT_DOUBLE_EQ(s.ball_pos.y, 148.4);
  EXPECT_EQ(out.score_delta, 0);
  EXPECT_TRUE(out.events.empty());
  EXPECT_EQ(s.frame, 1);
}

TEST(StepFrameTest, LeftWallReflection) {
  const GameConfig c;
  GameState s = in_flight(c, {9.5, 150}, {-1.2, -1.6});
  const StepOutcome out = step_frame(c, s, Action::Noop);
  EXPECT_DOUBLE_EQ(s.ball_vel.x, 1.2);
  EXPECT_DOUBLE_EQ(s.ball_vel.y, -1.6);
  EXPECT_NEAR(norm(s.ball_vel), 2.0, 1e-12);
  EXPECT_TRUE(out.has(EventKind::WallHit));
  // Contact after 0.5/1.2 of the frame, then 0.7/1.2 of a frame rightward.
  EXPECT_NEAR(s.ball_pos.x, 9.0 + 1.2 * (1 - 0.5 / 1.2), 1e-9);
}

TEST(StepFrameTest, PaddleMotionClampsToWalls) {
  const GameConfig c;
  GameState s = new_game(c);
  for (int i = 0; i < 100; ++i) step_frame(c, s, Action::Left);
  EXPECT_DOUBLE_EQ(s.paddle_x, c.wall_width + c.paddle_width / 2.0);
  for (int i = 0; i < 100; ++i) step_frame(c, s, Action::Right);
  EXPECT_DOUBLE_EQ(s.paddle_x, c.field_width - c.wall_width - c.paddle_width / 2.0);
}

TEST(StepFrameTest, FireServesOnlyWhenBallIsOut) {
  const GameConfig c;
  GameState s = new_game(c);
  step_frame(c, s, Action::Fire);
  ASSERT_TRUE(s.ball_in_play);
  EXPECT_GT(s.ball_vel.y, 0) << "serves head toward the paddle";
  EXPECT_NEAR(norm(s.ball_vel), c.ball_speed, 1e-8);
  const Vec2 vel = s.ball_vel;
  step_frame(c, s, Action::Fire);
  EXPECT_EQ(s.ball_vel, vel);
}

TEST(StepFrameTest, ServeSideFollowsRngState) {
  GameConfig c;
  int left = 0;
  int right = 0;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    c.rng_seed = seed;
    GameState s = new_game(c);
    step_frame(c, s, Action::Fire);
    (s.ball_vel.x < 0 ? left : right)++;
  }
  EXPECT_GT(left, 10);
  EXPECT_GT(right, 10);
}

TEST(StepFrameTest, LastBrickClearsLevel) {
  const GameConfig c;
  GameState s = only_brick(c, new_game(c), 0, 5);
  // Straight up beneath the center of brick (0, 5).
  const double x = c.interior_left() + 5.5 * c.brick_width();
  s = set_ball(c, s, {x, 100}, 90, c.ball_speed);
  StepOutcome out;
  int frames = 0;
  while (out.events.empty() && frames < 100) {
    out = step_frame(c, s, Action::Noop);
    ++frames;
  }
  ASSERT_TRUE(out.has(EventKind::BrickHit));
  EXPECT_EQ(out.events.front(), (Event{EventKind::BrickHit, 0, 5}));
  EXPECT_EQ(out.score_delta, 7);
  EXPECT_EQ(s.live_brick_count(), 0);
  EXPECT_TRUE(out.has(EventKind::LevelCleared));
  EXPECT_EQ(out.lifecycle, Lifecycle::LevelCleared);
  // Ball top at 99 travels 36 units to the brick bottom at 63.
  EXPECT_EQ(frames, 18);

  // The next frame loads the second wall.
  step_frame(c, s, Action::Noop);
  EXPECT_EQ(s.level, 2);
  EXPECT_EQ(s.live_brick_count(), 108);
  EXPECT_EQ(s.lifecycle, Lifecycle::Playing);
}

TEST(StepFrameTest, FinalLevelClearWinsGame) {
  GameConfig c;
  c.levels_to_win = 1;
  GameState s = only_brick(c, new_game(c), 5, 0);
  s = set_ball(c, s, {c.interior_left() + 4, 110}, 90, c.ball_speed);
  StepOutcome out;
  while (!out.has(EventKind::BrickHit)) out = step_frame(c, s, Action::Noop);
  EXPECT_TRUE(out.has(EventKind::GameWon));
  EXPECT_EQ(s.lifecycle, Lifecycle::GameWon);
  EXPECT_THROW(step_frame(c, s, Action::Noop), LifecycleError);
}

TEST(StepFrameTest, LosingTheBallCostsALife) {
  const GameConfig c;
  GameState s = in_flight(c, {20, 180}, {0, 2});
  s = set_paddle(c, s, 140);
  StepOutcome out;
  while (!out.has(EventKind::LifeLost)) out = step_frame(c, s, Action::Noop);
  EXPECT_EQ(s.lives_remaining, 4);
  EXPECT_EQ(s.lifecycle, Lifecycle::LifeLost);
  EXPECT_FALSE(s.ball_in_play);
  step_frame(c, s, Action::Noop);
  EXPECT_EQ(s.lifecycle, Lifecycle::Playing);
}

TEST(StepFrameTest, LastLifeEndsGame) {
  const GameConfig c;
  GameState s = in_flight(c, {20, 180}, {0, 2});
  s.lives_remaining = 1;
  s = set_paddle(c, s, 140);
  StepOutcome out;
  while (!out.has(EventKind::LifeLost)) out = step_frame(c, s, Action::Noop);
  EXPECT_EQ(s.lifecycle, Lifecycle::GameOver);
  EXPECT_THROW(step_frame(c, s, Action::Noop), LifecycleError);
}

TEST(StepFrameTest, PaddleCenterHitGoesStraightUp) {
  const GameConfig c;
  GameState s = in_flight(c, {80, 180}, {0, 2});
  StepOutcome out;
  while (!out.has(EventKind::PaddleHit)) out = step_frame(c, s, Action::Noop);
  EXPECT_DOUBLE_EQ(s.ball_vel.x, 0.0);
  EXPECT_DOUBLE_EQ(s.ball_vel.y, -2.0);
}

TEST(StepFrameTest, SimultaneousBrickContactPicksLowestColumn) {
  const GameConfig c;
  GameState s = new_game(c);
  // x = 80 is the seam between columns 8 and 9; both bottom faces are met
  // at the same instant.
  s = set_ball(c, s, {80, 110}, 90, c.ball_speed);
  StepOutcome out;
  while (!out.has(EventKind::BrickHit)) out = step_frame(c, s, Action::Noop);
  ASSERT_EQ(std::count_if(out.events.begin(), out.events.end(),
                          [](const Event& e) { return e.kind == EventKind::BrickHit; }),
            1);
  EXPECT_EQ(out.events.front(), (Event{EventKind::BrickHit, 5, 8}));
}

TEST(StepFrameTest, SpeedupScheduleAppliesAfterHits) {
  GameConfig c;
  c.speedup_schedule = {{2, 1.5}};
  GameState s = in_flight(c, {100, 150}, {2, 0});
  int hits = 0;
  while (hits < 2) {
    const StepOutcome out = step_frame(c, s, Action::Noop);
    hits += static_cast<int>(std::count_if(
        out.events.begin(), out.events.end(),
        [](const Event& e) { return e.kind == EventKind::WallHit; }));
  }
  EXPECT_NEAR(norm(s.ball_vel), 3.0, 1e-8);
}

TEST(StepFrameTest, PaddleShrinksOnCeilingWhenEnabled) {
  GameConfig c;
  c.shrink_paddle_on_ceiling = true;
  GameState s = new_game(c);
  s = only_brick(c, s, 0, 0);
  s = set_ball(c, s, {120, 110}, 90, c.ball_speed);
  StepOutcome out;
  while (!out.has(EventKind::CeilingHit)) out = step_frame(c, s, Action::Noop);
  EXPECT_TRUE(s.paddle_shrunk);
  EXPECT_DOUBLE_EQ(paddle_half_width(c, s), 6.0);

  GameConfig plain;
  GameState t = only_brick(plain, new_game(plain), 0, 0);
  t = set_ball(plain, t, {120, 110}, 90, plain.ball_speed);
  out = {};
  while (!out.has(EventKind::CeilingHit)) out = step_frame(plain, t, Action::Noop);
  EXPECT_FALSE(t.paddle_shrunk);
}

// --- Independent oracle: fine time-stepping of the straight-line path,
// reporting the first surface the ball box penetrates.

struct OracleContact {
  EventKind kind;
  int row = -1;
  int col = -1;
  double time = 0;
  double runner_up = std::numeric_limits<double>::infinity();
};

std::optional<OracleContact> first_contact_by_substeps(const GameConfig& c,
                                                       const GameState& s,
                                                       double max_time) {
  constexpr double kDt = 1e-3;
  constexpr double kDepth = 1e-7;
  const double h = c.ball_size / 2.0;
  std::optional<OracleContact> first;
  for (double t = 0; t <= max_time; t += kDt) {
    const double x = s.ball_pos.x + s.ball_vel.x * t;
    const double y = s.ball_pos.y + s.ball_vel.y * t;
    std::vector<OracleContact> touching;
    if (x - h < c.interior_left() - kDepth) touching.push_back({EventKind::WallHit});
    if (x + h > c.interior_right() + kDepth) touching.push_back({EventKind::WallHit});
    if (y - h < c.ceiling_y - kDepth) touching.push_back({EventKind::CeilingHit});
    if (y - h < c.brick_bottom_y()) {
      for (int r = 0; r < c.grid_rows; ++r) {
        for (int k = 0; k < c.grid_cols; ++k) {
          if (!s.bricks_alive[r * c.grid_cols + k]) continue;
          const double left = c.interior_left() + k * c.brick_width();
          const double top = c.brick_top_y + r * c.brick_height;
          if (x + h > left + kDepth && x - h < left + c.brick_width() - kDepth &&
              y + h > top + kDepth && y - h < top + c.brick_height - kDepth) {
            touching.push_back({EventKind::BrickHit, r, k});
          }
        }
      }
    }
    if (touching.empty()) continue;
    if (!first) {
      first = touching.front();
      first->time = t;
      if (touching.size() > 1) first->runner_up = t;
    } else {
      for (const OracleContact& o : touching) {
        if (o.kind != first->kind || o.row != first->row || o.col != first->col) {
          first->runner_up = std::min(first->runner_up, t);
        }
      }
    }
    if (t > first->time + 0.05) break;
  }
  return first;
}

TEST(StepFrameOracleTest, FirstContactMatchesSubstepOracle) {
  const GameConfig c;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> xs(15, 145), ys(100, 180),
      angles(15, 165), coin(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    GameState s = new_game(c);
    for (int r = 0; r < c.grid_rows; ++r) {
      for (int k = 0; k < c.grid_cols; ++k) {
        if (coin(rng) < 0.5 && s.live_brick_count() > 1) {
          s = set_brick(c, s, r, k, false);
        }
      }
    }
    s = set_ball(c, s, {xs(rng), ys(rng)}, angles(rng), c.ball_speed);
    const auto oracle = first_contact_by_substeps(c, s, 200);
    ASSERT_TRUE(oracle.has_value());
    // Skip near-ties and contacts too close to a frame boundary for the
    // substep resolution.
    if (oracle->runner_up - oracle->time < 0.02) continue;
    const double frac = oracle->time - std::floor(oracle->time);
    if (frac < 0.01 || frac > 0.99) continue;

    StepOutcome out;
    int frames = 0;
    while (out.events.empty()) {
      out = step_frame(c, s, Action::Noop);
      ++frames;
    }
    const Event& e = out.events.front();
    EXPECT_EQ(e.kind, oracle->kind) << "trial " << trial;
    if (e.kind == EventKind::BrickHit) {
      EXPECT_EQ(e.row, oracle->row) << "trial " << trial;
      EXPECT_EQ(e.col, oracle->col) << "trial " << trial;
    }
    EXPECT_EQ(frames, static_cast<int>(std::ceil(oracle->time))) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

// --- Properties over random play.

TEST(StepFramePropertyTest, InvariantsHoldUnderRandomPlay) {
  const GameConfig c;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    GameConfig cs = c;
    cs.rng_seed = seed;
    GameState s = new_game(cs);
    for (int f = 0; f < 5000 && !is_terminal(s.lifecycle); ++f) {
      const GameState before = s;
      Action a = testing::random_action(rng);
      if (s.ball_in_play && rng() % 4 != 0) {
        a = s.ball_pos.x > s.paddle_x + 2 ? Action::Right
            : s.ball_pos.x < s.paddle_x - 2 ? Action::Left : Action::Noop;
      }
      const StepOutcome out = step_frame(cs, s, a);
      ASSERT_GE(s.score, before.score);
      int brick_points = 0;
      for (const Event& e : out.events) {
        if (e.kind == EventKind::BrickHit) brick_points += brick_value(cs, e.row);
      }
      ASSERT_EQ(out.score_delta, brick_points);
      ASSERT_EQ(s.score - before.score, out.score_delta);
      if (s.level == before.level) {
        ASSERT_LE(s.live_brick_count(), before.live_brick_count());
      }
      if (s.ball_in_play) {
        ASSERT_NEAR(norm(s.ball_vel), scheduled_speed(cs, s.ball_hit_count), 1e-8);
        const double h = cs.ball_size / 2.0;
        ASSERT_GE(s.ball_pos.x - h, cs.interior_left() - 1e-6);
        ASSERT_LE(s.ball_pos.x + h, cs.interior_right() + 1e-6);
        ASSERT_GE(s.ball_pos.y - h, cs.ceiling_y - 1e-6);
        ASSERT_LE(s.ball_pos.y + h, cs.field_height);
      }
      const auto [lo, hi] = paddle_range(cs, s);
      ASSERT_GE(s.paddle_x, lo);
      ASSERT_LE(s.paddle_x, hi);
      ASSERT_NO_THROW(validate_state(cs, s)) << "seed " << seed << " frame " << f;
    }
  }
}

TEST(StepFramePropertyTest, ReplayIsBitIdentical) {
  const GameConfig c;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 a(seed), b(seed);
    const GameState x = evolve_mixed(c, new_game(c), 3000, a);
    const GameState y = evolve_mixed(c, new_game(c), 3000, b);
    EXPECT_EQ(x, y);
    EXPECT_EQ(export_text(x, c), export_text(y, c));
  }
}

TEST(StepFramePropertyTest, HorizontalBallBelowBricksNeverScores) {
  const GameConfig c;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ys(c.brick_bottom_y() + 2, c.paddle_y - 2);
  for (int trial = 0; trial < 20; ++trial) {
    for (double angle : {0.0, 180.0}) {
      GameState s = set_ball(c, new_game(c), {80, ys(rng)}, angle, c.ball_speed);
      for (int f = 0; f < 3000; ++f) {
        step_frame(c, s, testing::random_action(rng));
        ASSERT_EQ(s.score, 0);
        ASSERT_TRUE(s.ball_in_play);
      }
    }
  }
}

TEST(StepFramePropertyTest, ClearingALevelScoresTheLevelTotal) {
  const GameConfig c;
  GameState s = new_game(c);
  std::int64_t level_start = s.score;
  int levels = 0;
  for (int f = 0; f < 200000 && !is_terminal(s.lifecycle); ++f) {
    Action a = Action::Fire;
    if (s.ball_in_play) {
      const double target = s.ball_pos.x + 4 * s.ball_vel.x;
      a = target > s.paddle_x + 8 ? Action::Right
          : target < s.paddle_x - 8 ? Action::Left : Action::Noop;
    }
    const StepOutcome out = step_frame(c, s, a);
    if (out.has(EventKind::LevelCleared)) {
      EXPECT_EQ(s.score - level_start, level_total_score(c));
      level_start = s.score;
      ++levels;
    }
  }
  EXPECT_EQ(levels, 2);
  EXPECT_EQ(s.lifecycle, Lifecycle::GameWon);
  EXPECT_EQ(s.score, 864);
}

}  // namespace
}  // namespace toybox
