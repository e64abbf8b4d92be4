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

#ifndef TOYBOX_AGENTS_HPP_
#define TOYBOX_AGENTS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "toybox/breakout.hpp"
#include "toybox/env.hpp"
#include "toybox/errors.hpp"
#include "toybox/intervention.hpp"

namespace toybox {

// Anything that maps observations to actions. Seeded agents must be
// deterministic given their seed and the observation sequence.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual Action act(const Observation& observation) = 0;
  virtual void seed(std::uint64_t /*seed*/) {}
  virtual void on_reset() {}
};

// Uniform over legal_actions().
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}

  Action act(const Observation&) override {
    const auto actions = legal_actions();
    return actions[rng_() % actions.size()];
  }

  void seed(std::uint64_t seed) override { rng_.seed(seed); }

 private:
  std::mt19937_64 rng_;
};

// Serves whenever the ball is out of play, otherwise steers the paddle
// toward where the ball's x will be once the chosen action has been held for
// a full agent step. The dead zone is half the distance the paddle covers in
// one agent step, so a move never overshoots by more than it corrects.
class TrackerAgent : public Agent {
 public:
  TrackerAgent(const GameConfig& config, int frame_skip)
      : deadzone_(config.paddle_speed * frame_skip / 2.0),
        lead_frames_(frame_skip) {}

  double deadzone() const { return deadzone_; }

  Action act(const Observation& observation) override {
    const StateView& view = observation.state_view;
    if (!view.ball_in_play()) return Action::Fire;
    const double target = view.ball_pos().x + view.ball_vel().x * lead_frames_;
    const double offset = target - view.paddle_x();
    if (offset > deadzone_) return Action::Right;
    if (offset < -deadzone_) return Action::Left;
    return Action::Noop;
  }

 private:
  double deadzone_;
  int lead_frames_;
};

// Plays back a fixed action trace, then Noop forever.
class ReplayAgent : public Agent {
 public:
  explicit ReplayAgent(std::vector<Action> trace) : trace_(std::move(trace)) {
    if (trace_.empty()) throw FieldError("trace", "must not be empty");
  }

  Action act(const Observation&) override {
    return next_ < trace_.size() ? trace_[next_++] : Action::Noop;
  }

  void on_reset() override { next_ = 0; }

 private:
  std::vector<Action> trace_;
  std::size_t next_ = 0;
};

// Action names (Noop, Fire, Left, Right) or indices 0..3, separated by
// whitespace or commas.
inline std::vector<Action> parse_trace(const std::string& text) {
  std::string normalized = text;
  for (char& ch : normalized) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(normalized);
  std::vector<Action> trace;
  std::string token;
  while (in >> token) {
    if (auto a = parse_action(token)) {
      trace.push_back(*a);
    } else if (token.size() == 1 && token[0] >= '0' && token[0] <= '3') {
      trace.push_back(action_from_index(token[0] - '0'));
    } else {
      throw FieldError("trace", "unknown action '" + token + "'");
    }
  }
  return trace;
}

inline std::string format_trace(const std::vector<Action>& trace) {
  std::string out;
  for (Action a : trace) {
    out += to_string(a);
    out += '\n';
  }
  return out;
}

using AgentFactory = std::function<std::unique_ptr<Agent>(std::uint64_t seed)>;
using AgentParams = std::map<std::string, std::string>;

// Builds a factory for the named baseline: "random", "tracker", or "replay"
// (params: trace=<file> or actions=<list>).
inline AgentFactory make_agent_factory(const std::string& name,
                                       const AgentParams& params,
                                       const GameConfig& config,
                                       int frame_skip) {
  if (name == "random") {
    return [](std::uint64_t seed) { return std::make_unique<RandomAgent>(seed); };
  }
  if (name == "tracker") {
    return [config, frame_skip](std::uint64_t) {
      return std::make_unique<TrackerAgent>(config, frame_skip);
    };
  }
  if (name == "replay") {
    std::vector<Action> trace;
    if (auto it = params.find("trace"); it != params.end()) {
      trace = parse_trace(read_file(it->second));
    } else if (auto it = params.find("actions"); it != params.end()) {
      trace = parse_trace(it->second);
    } else {
      throw FieldError("agent.replay", "needs trace=<file> or actions=<list>");
    }
    if (trace.empty()) throw FieldError("trace", "must not be empty");
    return [trace](std::uint64_t) {
      return std::make_unique<ReplayAgent>(trace);
    };
  }
  throw FieldError("agent", "unknown agent '" + name + "'");
}

}  // namespace toybox

#endif  // TOYBOX_AGENTS_HPP_
