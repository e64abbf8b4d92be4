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

#ifndef TOYBOX_TESTS_TEST_UTIL_HPP_
#define TOYBOX_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "toybox/toybox.hpp"

namespace toybox::testing {

// Leaves only (row, col) alive.
inline GameState only_brick(const GameConfig& c, GameState s, int row,
                            int col) {
  s = set_brick(c, std::move(s), row, col, true);
  for (int r = 0; r < c.grid_rows; ++r) {
    for (int k = 0; k < c.grid_cols; ++k) {
      if (r != row || k != col) s = set_brick(c, std::move(s), r, k, false);
    }
  }
  return s;
}

inline Action random_action(std::mt19937_64& rng) {
  return kAllActions[rng() % kAllActions.size()];
}

// Plays up to `frames` random frames, stopping at a terminal lifecycle.
inline GameState evolve(const GameConfig& c, GameState s, int frames,
                        std::mt19937_64& rng) {
  for (int i = 0; i < frames && !is_terminal(s.lifecycle); ++i) {
    step_frame(c, s, random_action(rng));
  }
  return s;
}

// Random rollouts that keep the ball alive longer than uniform play: mostly
// steer under the ball, sometimes act randomly.
inline GameState evolve_mixed(const GameConfig& c, GameState s, int frames,
                              std::mt19937_64& rng) {
  for (int i = 0; i < frames && !is_terminal(s.lifecycle); ++i) {
    Action a = random_action(rng);
    if (s.ball_in_play && rng() % 4 != 0) {
      const double target = s.ball_pos.x + s.ball_vel.x;
      a = target > s.paddle_x + 2   ? Action::Right
          : target < s.paddle_x - 2 ? Action::Left
                                    : Action::Noop;
    }
    step_frame(c, s, a);
  }
  return s;
}

}  // namespace toybox::testing

#endif  // TOYBOX_TESTS_TEST_UTIL_HPP_
