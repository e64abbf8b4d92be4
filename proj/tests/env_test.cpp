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

#include <random>
#include <set>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "toybox/env.hpp"
#include "toybox/render.hpp"

namespace toybox {
namespace {

using testing::only_brick;

TEST(EnvTest, ResetShowsFreshGame) {
  Env env(EnvParams{});
  const Observation obs = env.reset();
  EXPECT_EQ(obs.state_view.score(), 0);
  EXPECT_EQ(obs.state_view.lives(), 5);
  ASSERT_TRUE(obs.frame.has_value());
}

TEST(EnvTest, ResetFromOneBrickDocument) {
  const GameConfig c;
  EnvParams p;
  p.start = export_state(only_brick(c, new_game(c), 4, 4), c);
  Env env(p);
  EXPECT_EQ(env.reset().state_view.live_brick_count(), 1);
}

TEST(EnvTest, SameSeedSameFrames) {
  Env a(EnvParams{}), b(EnvParams{});
  EXPECT_EQ(a.reset(42).frame, b.reset(42).frame);
  for (int i = 0; i < 200 && !a.done(); ++i) {
    const Action act = kAllActions[i % 4];
    const StepReturn x = a.step(act);
    const StepReturn y = b.step(act);
    ASSERT_EQ(x.observation.frame, y.observation.frame);
    ASSERT_EQ(x.reward, y.reward);
  }
}

TEST(EnvTest, ValueSevenBrickGivesRewardOne) {
  const GameConfig c;
  GameState s = only_brick(c, new_game(c), 0, 5);
  s = set_ball(c, s, {c.interior_left() + 5.5 * c.brick_width(), 100}, 90, 2);
  EnvParams p;
  p.start = export_state(s, c);
  p.frame_skip = 1;
  p.policy = EpisodePolicy::single_life_single_level(14400);
  Env env(p);
  env.reset();
  std::int64_t reward = 0;
  StepInfo info;
  while (!env.done()) {
    StepReturn r = env.step(Action::Noop);
    if (r.reward != 0) {
      reward = r.reward;
      info = r.info;
      break;
    }
  }
  EXPECT_EQ(reward, 1);
  EXPECT_EQ(info.score, 7);

  p.truncate_rewards = false;
  Env raw(p);
  raw.reset();
  std::int64_t sum = 0;
  while (!raw.done()) sum += raw.step(Action::Noop).reward;
  EXPECT_EQ(sum, 7);
}

TEST(EnvTest, QuietStepGivesZeroReward) {
  Env env(EnvParams{});
  env.reset();
  const StepReturn r = env.step(Action::Noop);
  EXPECT_EQ(r.reward, 0);
  EXPECT_TRUE(r.info.events.empty());
  EXPECT_EQ(r.info.frame, 4);
}

TEST(EnvTest, RewardsNeverNegativeAndSumToScore) {
  EnvParams p;
  p.render = false;
  p.frame_skip = 1;
  Env truncated(p);
  p.truncate_rewards = false;
  Env raw(p);
  std::mt19937_64 rng(8);
  std::int64_t frames = 0;
  std::uint64_t episode = 0;
  while (frames < 100000) {
    truncated.reset(episode);
    raw.reset(episode);
    std::int64_t raw_sum = 0;
    while (!truncated.done() && frames < 100000) {
      const Action a = testing::random_action(rng);
      const StepReturn t = truncated.step(a);
      const StepReturn r = raw.step(a);
      ASSERT_TRUE(t.reward == 0 || t.reward == 1) << t.reward;
      ASSERT_EQ(t.reward, r.reward > 0 ? 1 : 0);
      raw_sum += r.reward;
      ++frames;
    }
    if (truncated.done()) {
      EXPECT_EQ(raw_sum, raw.state().score);
    }
    ++episode;
  }
}

TEST(EnvTest, StepAfterDoneThrows) {
  EnvParams p;
  p.policy.max_frames = 8;
  Env env(p);
  env.reset();
  env.step(Action::Noop);
  const StepReturn r = env.step(Action::Noop);
  EXPECT_TRUE(r.done);
  EXPECT_TRUE(r.info.truncated);
  EXPECT_THROW(env.step(Action::Noop), LifecycleError);
}

TEST(EnvTest, StepBeforeResetThrows) {
  Env env(EnvParams{});
  EXPECT_THROW(env.step(Action::Noop), LifecycleError);
}

TEST(EnvTest, SingleLifePolicyEndsOnLifeLost) {
  const GameConfig c;
  GameState s = set_ball(c, new_game(c), {20, 170}, 270, 2);
  s = set_paddle(c, s, 140);
  EnvParams p;
  p.start = export_state(s, c);
  p.policy = EpisodePolicy::single_life_single_level(14400);
  Env env(p);
  env.reset();
  StepReturn r = env.step(Action::Noop);
  while (!r.done) r = env.step(Action::Noop);
  EXPECT_EQ(r.info.lives, 4);
  EXPECT_FALSE(r.info.truncated);
  EXPECT_LE(env.frames_elapsed(), 20);
}

TEST(EnvTest, DumpAndLoadRestoresState) {
  EnvParams p;
  p.render = false;
  Env env(p);
  env.reset(3);
  for (int i = 0; i < 50; ++i) env.step(i % 5 == 0 ? Action::Fire : Action::Left);
  const std::string doc = env.dump_state();
  Env other(p);
  other.load_state(doc);
  other.reset();
  EXPECT_EQ(other.state(), env.state());
  EXPECT_EQ(other.dump_state(), doc);
}

TEST(EnvTest, InfoJsonKeys) {
  Env env(EnvParams{});
  env.reset();
  const nlohmann::json j = info_json(env.step(Action::Fire).info);
  for (const char* key : {"score", "lives", "frame", "events"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(EnvTest, LegalActions) {
  const auto actions = legal_actions();
  ASSERT_EQ(actions.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(static_cast<int>(actions[i]), i);
    EXPECT_EQ(action_from_index(i), actions[i]);
  }
  EXPECT_THROW(action_from_index(4), FieldError);
}

TEST(EnvTest, RejectsBadParams) {
  EnvParams p;
  p.frame_skip = 0;
  EXPECT_THROW(Env{p}, FieldError);
}

TEST(RenderTest, FrameShape) {
  const GameConfig c;
  const Frame f = render_frame(new_game(c), c);
  EXPECT_EQ(Frame::kHeight, 210);
  EXPECT_EQ(Frame::kWidth, 160);
  EXPECT_EQ(Frame::kChannels, 3);
  EXPECT_EQ(f.bytes().size(), 210u * 160u * 3u);
}

std::set<std::uint32_t> brick_region_colors(const GameConfig& c, const Frame& f) {
  std::set<std::uint32_t> colors;
  for (int y = c.brick_top_y; y < c.brick_bottom_y(); ++y) {
    for (int x = c.interior_left(); x < c.interior_right(); ++x) {
      colors.insert(f.rgb(y, x));
    }
  }
  return colors;
}

TEST(RenderTest, OneColorPerBrickRow) {
  const GameConfig c;
  std::set<std::uint32_t> colors = brick_region_colors(c, render_frame(new_game(c), c));
  colors.erase(c.background_color);
  EXPECT_EQ(colors.size(), static_cast<std::size_t>(c.grid_rows));
  for (std::uint32_t rc : c.row_colors) EXPECT_TRUE(colors.count(rc));
}

TEST(RenderTest, NoBrickPixelsWithoutBricks) {
  const GameConfig c;
  GameState s = new_game(c);
  std::fill(s.bricks_alive.begin(), s.bricks_alive.end(), 0);
  const std::set<std::uint32_t> colors = brick_region_colors(c, render_frame(s, c));
  for (std::uint32_t rc : c.row_colors) EXPECT_FALSE(colors.count(rc));
}

TEST(RenderTest, BallAndPaddleAreDrawn) {
  const GameConfig c;
  GameState s = set_ball(c, new_game(c), {100, 150}, 90, 2);
  const Frame f = render_frame(s, c);
  EXPECT_EQ(f.rgb(150, 100), c.ball_color);
  EXPECT_EQ(f.rgb(c.paddle_y + 1, 80), c.paddle_color);
}

TEST(RenderTest, PpmHeader) {
  const GameConfig c;
  const std::string ppm = to_ppm(render_frame(new_game(c), c));
  EXPECT_EQ(ppm.rfind("P6\n160 210\n255\n", 0), 0u);
  EXPECT_EQ(ppm.size(), 15u + 210u * 160u * 3u);
}

}  // namespace
}  // namespace toybox
