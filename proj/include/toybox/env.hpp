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

#ifndef TOYBOX_ENV_HPP_
#define TOYBOX_ENV_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "toybox/breakout.hpp"
#include "toybox/config.hpp"
#include "toybox/errors.hpp"
#include "toybox/intervention.hpp"
#include "toybox/render.hpp"

namespace toybox {

inline std::span<const Action> legal_actions() { return kAllActions; }

// When an episode ends. Reaching GameWon or GameOver always ends it.
struct EpisodePolicy {
  bool end_on_life_lost = false;
  bool end_on_level_cleared = false;
  // Hard frame budget counted from reset; 0 means unbounded.
  std::int64_t max_frames = 0;

  static EpisodePolicy full_game() { return {}; }
  static EpisodePolicy single_life_single_level(std::int64_t max_frames) {
    return {true, true, max_frames};
  }
};

struct EnvParams {
  GameConfig config;
  // When present, reset() restarts from this document (and its embedded
  // config) instead of a fresh game.
  std::optional<StateDocument> start;
  int frame_skip = 4;
  bool truncate_rewards = true;
  EpisodePolicy policy;
  // Pixel observations are skipped when false; state_view is always filled.
  bool render = true;
};

// Read-only structured snapshot handed to agents alongside the pixels.
class StateView {
 public:
  StateView(std::shared_ptr<const GameConfig> config, GameState state)
      : config_(std::move(config)), state_(std::move(state)) {}

  const GameConfig& config() const { return *config_; }
  const GameState& state() const { return state_; }

  std::int64_t score() const { return state_.score; }
  int lives() const { return state_.lives_remaining; }
  int level() const { return state_.level; }
  Vec2 ball_pos() const { return state_.ball_pos; }
  Vec2 ball_vel() const { return state_.ball_vel; }
  bool ball_in_play() const { return state_.ball_in_play; }
  double paddle_x() const { return state_.paddle_x; }
  int live_brick_count() const { return state_.live_brick_count(); }

  QueryValue query(std::string_view selector) const {
    return toybox::query(*config_, state_, selector);
  }

 private:
  std::shared_ptr<const GameConfig> config_;
  GameState state_;
};

struct Observation {
  std::optional<Frame> frame;
  StateView state_view;
};

struct TimedEvent {
  std::int64_t frame = 0;
  Event event;
};

struct StepInfo {
  std::int64_t score = 0;
  int lives = 0;
  std::int64_t frame = 0;
  std::vector<TimedEvent> events;
  // The frame budget, not the game, ended the episode.
  bool truncated = false;
};

struct StepReturn {
  Observation observation;
  // sign(score delta) with truncation, otherwise the raw score delta.
  std::int64_t reward = 0;
  bool done = false;
  StepInfo info;
};

inline nlohmann::json info_json(const StepInfo& info) {
  nlohmann::json events = nlohmann::json::array();
  for (const TimedEvent& e : info.events) {
    nlohmann::json j = {{"frame", e.frame},
                        {"kind", std::string(to_string(e.event.kind))}};
    if (e.event.kind == EventKind::BrickHit) {
      j["row"] = e.event.row;
      j["col"] = e.event.col;
    }
    events.push_back(std::move(j));
  }
  return {{"score", info.score},
          {"lives", info.lives},
          {"frame", info.frame},
          {"events", events},
          {"truncated", info.truncated}};
}

class Env {
 public:
  explicit Env(EnvParams params) : params_(std::move(params)) {
    if (params_.frame_skip < 1) {
      throw FieldError("frame_skip", "must be at least 1");
    }
    if (params_.policy.max_frames < 0) {
      throw FieldError("max_frames", "must be non-negative");
    }
    if (params_.start) {
      params_.config = import_state(*params_.start).config;
    } else {
      validate(params_.config);
    }
    config_ = std::make_shared<const GameConfig>(params_.config);
  }

  const EnvParams& params() const { return params_; }
  const GameConfig& config() const { return *config_; }
  const GameState& state() const { return state_; }
  bool done() const { return done_; }
  std::int64_t frames_elapsed() const { return state_.frame - start_frame_; }

  // Replaces the start document used by subsequent resets.
  void load_state(std::string_view document_text) {
    StateDocument doc = parse_document(document_text);
    ImportedState imported = import_state(doc);
    params_.start = std::move(doc);
    params_.config = imported.config;
    config_ = std::make_shared<const GameConfig>(params_.config);
  }

  std::string dump_state() const { return export_text(state_, *config_); }

  // With a seed, the serve-side generator is reseeded after loading the
  // start state.
  Observation reset(std::optional<std::uint64_t> seed = std::nullopt) {
    state_ = params_.start ? import_state(*params_.start).state
                           : new_game(*config_);
    if (seed) state_.rng_state = *seed;
    start_frame_ = state_.frame;
    done_ = is_terminal(state_.lifecycle);
    started_ = true;
    return observe();
  }

  StepReturn step(Action action) { return step_for(action, params_.frame_skip); }

  // Holds `action` for up to `frames` frames, stopping early when the episode
  // ends.
  StepReturn step_for(Action action, int frames) {
    if (!started_) throw LifecycleError("step: call reset() first");
    if (done_) throw LifecycleError("step: episode is done; call reset()");
    if (frames < 1) throw FieldError("frames", "must be at least 1");
    const EpisodePolicy& policy = params_.policy;
    StepInfo info;
    std::int64_t raw = 0;
    for (int i = 0; i < frames && !done_; ++i) {
      StepOutcome out = step_frame(*config_, state_, action);
      raw += out.score_delta;
      for (const Event& e : out.events) {
        info.events.push_back({state_.frame, e});
        if ((e.kind == EventKind::LifeLost && policy.end_on_life_lost) ||
            (e.kind == EventKind::LevelCleared && policy.end_on_level_cleared)) {
          done_ = true;
        }
      }
      if (is_terminal(state_.lifecycle)) done_ = true;
      if (!done_ && policy.max_frames > 0 &&
          frames_elapsed() >= policy.max_frames) {
        done_ = true;
        info.truncated = true;
      }
    }
    info.score = state_.score;
    info.lives = state_.lives_remaining;
    info.frame = state_.frame;
    const std::int64_t reward =
        params_.truncate_rewards ? (raw > 0) - (raw < 0) : raw;
    return {observe(), reward, done_, std::move(info)};
  }

 private:
  Observation observe() const {
    Observation obs{std::nullopt, StateView(config_, state_)};
    if (params_.render) obs.frame = render_frame(state_, *config_);
    return obs;
  }

  EnvParams params_;
  std::shared_ptr<const GameConfig> config_;
  GameState state_;
  std::int64_t start_frame_ = 0;
  bool done_ = false;
  bool started_ = false;
};

}  // namespace toybox

#endif  // TOYBOX_ENV_HPP_
