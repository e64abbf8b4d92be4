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

#ifndef TOYBOX_HARNESS_HPP_
#define TOYBOX_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "toybox/agents.hpp"
#include "toybox/breakout.hpp"
#include "toybox/env.hpp"
#include "toybox/intervention.hpp"

namespace toybox {

// Four minutes of play at 60 frames per second.
inline constexpr std::int64_t kDefaultBudgetFrames = 4 * 60 * 60;
inline constexpr int kDefaultTrials = 30;

enum class Requirement : std::uint8_t { R1, R2, R3 };

inline std::string_view to_string(Requirement r) {
  switch (r) {
    case Requirement::R1: return "R1";
    case Requirement::R2: return "R2";
    case Requirement::R3: return "R3";
  }
  return "?";
}

struct BrickCell {
  int row = 0;
  int col = 0;

  friend bool operator==(const BrickCell&, const BrickCell&) = default;
};

struct SuccessPredicate {
  enum class Kind : std::uint8_t { TargetBrickCleared, LevelCleared, ScoreAtLeast };

  Kind kind = Kind::LevelCleared;
  BrickCell target;
  std::int64_t score = 0;

  static SuccessPredicate target_brick_cleared(BrickCell cell) {
    return {Kind::TargetBrickCleared, cell, 0};
  }
  static SuccessPredicate level_cleared() { return {Kind::LevelCleared, {}, 0}; }
  static SuccessPredicate score_at_least(std::int64_t n) {
    return {Kind::ScoreAtLeast, {}, n};
  }
};

inline std::string describe(const SuccessPredicate& p) {
  switch (p.kind) {
    case SuccessPredicate::Kind::TargetBrickCleared:
      return "TargetBrickCleared(" + std::to_string(p.target.row) + "," +
             std::to_string(p.target.col) + ")";
    case SuccessPredicate::Kind::LevelCleared:
      return "LevelCleared";
    case SuccessPredicate::Kind::ScoreAtLeast:
      return "ScoreAtLeast(" + std::to_string(p.score) + ")";
  }
  return "?";
}

enum class ExpectedOutcome : std::uint8_t { Pass, Fail };

struct TestCase {
  std::string id;
  Requirement requirement = Requirement::R1;
  StateDocument start;
  SuccessPredicate success;
  std::int64_t budget_frames = kDefaultBudgetFrames;
  // Set on cases known to be unwinnable (horizontal serves).
  std::optional<ExpectedOutcome> expected_outcome;
  std::optional<BrickCell> cell;
  std::optional<double> angle_deg;
};

namespace detail {

inline GameState single_life_start(const GameConfig& c) {
  GameState s = new_game(c);
  s.lives_remaining = 1;
  return s;
}

inline std::string cell_id(std::string_view prefix, int row, int col) {
  return std::string(prefix) + "_r" + std::to_string(row) + "_c" +
         std::to_string(col);
}

inline std::string angle_id(double angle) {
  if (angle == std::floor(angle) && angle >= 0 && angle < 1000) {
    std::string digits = std::to_string(static_cast<int>(angle));
    return "r2_a" + std::string(3 - digits.size(), '0') + digits;
  }
  return "r2_a" + format_real(angle);
}

inline bool is_horizontal(double angle_deg) {
  const double a = std::fmod(std::fmod(angle_deg, 180.0) + 180.0, 180.0);
  return a == 0.0;
}

}  // namespace detail

// One case per brick: only that brick remains, one life, serve pending.
inline std::vector<TestCase> gen_r1_suite(
    const GameConfig& c, std::int64_t budget_frames = kDefaultBudgetFrames) {
  const GameState base = detail::single_life_start(c);
  std::vector<TestCase> cases;
  for (int row = 0; row < c.grid_rows; ++row) {
    for (int col = 0; col < c.grid_cols; ++col) {
      GameState s = base;
      std::fill(s.bricks_alive.begin(), s.bricks_alive.end(), 0);
      s.bricks_alive[brick_index(c, row, col)] = 1;
      TestCase tc;
      tc.id = detail::cell_id("r1", row, col);
      tc.requirement = Requirement::R1;
      tc.start = export_state(s, c);
      tc.success = SuccessPredicate::target_brick_cleared({row, col});
      tc.budget_frames = budget_frames;
      tc.cell = BrickCell{row, col};
      cases.push_back(std::move(tc));
    }
  }
  return cases;
}

inline std::vector<double> default_r2_angles(double step_deg = 15.0) {
  if (!(step_deg > 0)) throw FieldError("angle_step", "must be positive");
  std::vector<double> angles;
  for (int i = 0; i * step_deg < 360.0; ++i) angles.push_back(i * step_deg);
  return angles;
}

// One case per angle: full wall, one life, ball already moving from the
// serve point at that angle (counterclockwise from rightward).
inline std::vector<TestCase> gen_r2_suite(
    const GameConfig& c, const std::vector<double>& angles,
    std::int64_t budget_frames = kDefaultBudgetFrames) {
  if (angles.empty()) throw FieldError("angles", "must not be empty");
  const GameState base = detail::single_life_start(c);
  const Vec2 serve_point{c.field_width / 2.0, static_cast<double>(c.serve_y)};
  std::vector<TestCase> cases;
  for (double angle : angles) {
    GameState s = set_ball(c, base, serve_point, angle, c.ball_speed);
    TestCase tc;
    tc.id = detail::angle_id(angle);
    tc.requirement = Requirement::R2;
    tc.start = export_state(s, c);
    tc.success = SuccessPredicate::level_cleared();
    tc.budget_frames = budget_frames;
    tc.angle_deg = angle;
    if (detail::is_horizontal(angle)) tc.expected_outcome = ExpectedOutcome::Fail;
    cases.push_back(std::move(tc));
  }
  return cases;
}

// One case per brick: full wall except that the brick's column is open
// everywhere but the brick itself.
inline std::vector<TestCase> gen_r3_suite(
    const GameConfig& c, std::int64_t budget_frames = kDefaultBudgetFrames) {
  const GameState base = detail::single_life_start(c);
  std::vector<TestCase> cases;
  for (int row = 0; row < c.grid_rows; ++row) {
    for (int col = 0; col < c.grid_cols; ++col) {
      GameState s = base;
      for (int r = 0; r < c.grid_rows; ++r) {
        s.bricks_alive[brick_index(c, r, col)] = r == row ? 1 : 0;
      }
      TestCase tc;
      tc.id = detail::cell_id("r3", row, col);
      tc.requirement = Requirement::R3;
      tc.start = export_state(s, c);
      tc.success = SuccessPredicate::target_brick_cleared({row, col});
      tc.budget_frames = budget_frames;
      tc.cell = BrickCell{row, col};
      cases.push_back(std::move(tc));
    }
  }
  return cases;
}

enum class TrialOutcome : std::uint8_t { Success, Death, Timeout, Error };

inline std::string_view to_string(TrialOutcome o) {
  switch (o) {
    case TrialOutcome::Success: return "Success";
    case TrialOutcome::Death: return "Death";
    case TrialOutcome::Timeout: return "Timeout";
    case TrialOutcome::Error: return "Error";
  }
  return "?";
}

struct TrialResult {
  std::string case_id;
  int trial = 0;
  std::uint64_t seed = 0;
  TrialOutcome outcome = TrialOutcome::Timeout;
  std::int64_t frames_used = 0;
  std::int64_t agent_steps_used = 0;
  std::int64_t final_score = 0;
  // Set only for Error.
  std::string error;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

struct TrialOptions {
  int frame_skip = 4;
  std::uint64_t seed = 0;
  int trial = 0;
  bool render = false;
};

// Plays `tc` once under the single-life, single-level protocol. Import
// failures throw; agent exceptions come back as TrialOutcome::Error.
inline TrialResult run_trial(const TestCase& tc, Agent& agent,
                             const TrialOptions& options = {}) {
  if (tc.budget_frames <= 0) {
    throw FieldError("budget_frames", "must be positive");
  }
  EnvParams params;
  params.start = tc.start;
  params.frame_skip = options.frame_skip;
  params.policy = EpisodePolicy::single_life_single_level(tc.budget_frames);
  params.render = options.render;
  Env env(std::move(params));

  TrialResult result;
  result.case_id = tc.id;
  result.trial = options.trial;
  result.seed = options.seed;

  agent.seed(options.seed);
  agent.on_reset();
  Observation obs = env.reset(options.seed);
  const std::int64_t start_frame = env.state().frame;
  std::int64_t running_score = env.state().score;
  const SuccessPredicate& goal = tc.success;
  std::optional<std::int64_t> decided_at;

  auto satisfied = [&](const Event& e) {
    switch (goal.kind) {
      case SuccessPredicate::Kind::TargetBrickCleared:
        return e.kind == EventKind::BrickHit && e.row == goal.target.row &&
               e.col == goal.target.col;
      case SuccessPredicate::Kind::LevelCleared:
        return e.kind == EventKind::LevelCleared;
      case SuccessPredicate::Kind::ScoreAtLeast:
        return running_score >= goal.score;
    }
    return false;
  };

  while (!env.done() && !decided_at) {
    Action action;
    try {
      action = agent.act(obs);
    } catch (const std::exception& e) {
      result.outcome = TrialOutcome::Error;
      result.error = e.what();
      break;
    }
    StepReturn ret = env.step(action);
    ++result.agent_steps_used;
    for (const TimedEvent& te : ret.info.events) {
      if (te.event.kind == EventKind::BrickHit) {
        running_score += brick_value(env.config(), te.event.row);
      }
      if (satisfied(te.event)) {
        result.outcome = TrialOutcome::Success;
        decided_at = te.frame - start_frame;
        break;
      }
      if (te.event.kind == EventKind::LifeLost) {
        result.outcome = TrialOutcome::Death;
        decided_at = te.frame - start_frame;
        break;
      }
    }
    obs = std::move(ret.observation);
  }
  if (!decided_at && result.outcome != TrialOutcome::Error) {
    result.outcome = TrialOutcome::Timeout;
  }
  result.frames_used = decided_at.value_or(env.frames_elapsed());
  result.final_score = env.state().score;
  return result;
}

// Per-case summary. Death/Timeout/Error trials count as the full budget
// when taking median steps.
struct CaseAggregates {
  double success_rate = 0;
  double median_steps = 0;
  double reciprocal_median = 0;
  double median_frames = 0;
  double reciprocal_median_frames = 0;
  double mean_score = 0;
  double max_score = 0;
  double median_score = 0;
  double percentile25_score = 0;
  double percentile75_score = 0;

  friend bool operator==(const CaseAggregates&, const CaseAggregates&) = default;
};

// Linear interpolation between closest ranks.
inline double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw FieldError("values", "must not be empty");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  return values[lo] + (values[hi] - values[lo]) * (rank - lo);
}

inline std::int64_t budget_steps(std::int64_t budget_frames, int frame_skip) {
  return (budget_frames + frame_skip - 1) / frame_skip;
}

inline CaseAggregates aggregate(const std::vector<TrialResult>& trials,
                                std::int64_t budget_frames, int frame_skip) {
  if (trials.empty()) throw FieldError("trials", "must not be empty");
  std::vector<double> steps, frames, scores;
  int successes = 0;
  double total = 0;
  for (const TrialResult& t : trials) {
    const bool ok = t.outcome == TrialOutcome::Success;
    successes += ok;
    steps.push_back(static_cast<double>(
        ok ? t.agent_steps_used : budget_steps(budget_frames, frame_skip)));
    frames.push_back(static_cast<double>(ok ? t.frames_used : budget_frames));
    scores.push_back(static_cast<double>(t.final_score));
    total += static_cast<double>(t.final_score);
  }
  CaseAggregates a;
  a.success_rate = static_cast<double>(successes) / trials.size();
  a.median_steps = percentile(steps, 50);
  a.reciprocal_median = 1.0 / std::max(1.0, a.median_steps);
  a.median_frames = percentile(frames, 50);
  a.reciprocal_median_frames = 1.0 / std::max(1.0, a.median_frames);
  a.mean_score = total / trials.size();
  a.max_score = *std::max_element(scores.begin(), scores.end());
  a.median_score = percentile(scores, 50);
  a.percentile25_score = percentile(scores, 25);
  a.percentile75_score = percentile(scores, 75);
  return a;
}

struct CaseResult {
  std::string case_id;
  Requirement requirement = Requirement::R1;
  std::optional<BrickCell> cell;
  std::optional<double> angle_deg;
  std::optional<ExpectedOutcome> expected_outcome;
  std::int64_t budget_frames = 0;
  std::vector<TrialResult> trials;
  CaseAggregates aggregates;
};

struct SuiteOptions {
  int trials = kDefaultTrials;
  std::uint64_t base_seed = 0;
  int frame_skip = 4;
  // Worker threads; results do not depend on this.
  int threads = 1;
  std::string agent_name = "agent";
};

struct SuiteResult {
  std::string agent_name;
  std::uint64_t base_seed = 0;
  int trials = 0;
  int frame_skip = 0;
  std::vector<CaseResult> cases;
};

class TrialError : public std::runtime_error {
 public:
  TrialError(std::string case_id, const std::string& message)
      : std::runtime_error("case " + case_id + ": " + message),
        case_id_(std::move(case_id)) {}
  const std::string& case_id() const noexcept { return case_id_; }

 private:
  std::string case_id_;
};

// Runs options.trials independent trials of every case; trial i uses seed
// base_seed + i for both the serve generator and the agent. Any trial error
// is rethrown as a TrialError naming its case.
inline SuiteResult run_suite(const std::vector<TestCase>& cases,
                             const AgentFactory& make_agent,
                             const SuiteOptions& options = {}) {
  if (options.trials < 1) throw FieldError("trials", "must be at least 1");
  if (options.frame_skip < 1) {
    throw FieldError("frame_skip", "must be at least 1");
  }
  const std::size_t per_case = static_cast<std::size_t>(options.trials);
  const std::size_t total = cases.size() * per_case;
  std::vector<TrialResult> flat(total);

  auto run_one = [&](std::size_t index) {
    const TestCase& tc = cases[index / per_case];
    const int trial = static_cast<int>(index % per_case);
    const std::uint64_t seed = options.base_seed + static_cast<std::uint64_t>(trial);
    TrialResult& out = flat[index];
    try {
      std::unique_ptr<Agent> agent = make_agent(seed);
      out = run_trial(tc, *agent, {options.frame_skip, seed, trial, false});
    } catch (const std::exception& e) {
      out.case_id = tc.id;
      out.trial = trial;
      out.seed = seed;
      out.outcome = TrialOutcome::Error;
      out.error = e.what();
    }
  };

  const int workers = std::max(1, options.threads);
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) run_one(i);
      });
    }
  }

  SuiteResult result;
  result.agent_name = options.agent_name;
  result.base_seed = options.base_seed;
  result.trials = options.trials;
  result.frame_skip = options.frame_skip;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const TestCase& tc = cases[k];
    CaseResult cr;
    cr.case_id = tc.id;
    cr.requirement = tc.requirement;
    cr.cell = tc.cell;
    cr.angle_deg = tc.angle_deg;
    cr.expected_outcome = tc.expected_outcome;
    cr.budget_frames = tc.budget_frames;
    cr.trials.assign(flat.begin() + k * per_case,
                     flat.begin() + (k + 1) * per_case);
    for (const TrialResult& t : cr.trials) {
      if (t.outcome == TrialOutcome::Error) {
        throw TrialError(tc.id, "trial " + std::to_string(t.trial) +
                                    " (seed " + std::to_string(t.seed) +
                                    "): " + t.error);
      }
    }
    cr.aggregates = aggregate(cr.trials, tc.budget_frames, options.frame_skip);
    result.cases.push_back(std::move(cr));
  }
  return result;
}

// A case passes when at least `pass_rate` of its trials succeed.
inline bool case_passes(const CaseResult& cr, double pass_rate) {
  return cr.aggregates.success_rate >= pass_rate;
}

// Acceptance gate: every case not annotated as an expected failure passes.
inline bool gate(const SuiteResult& result, double pass_rate) {
  return std::all_of(result.cases.begin(), result.cases.end(),
                     [&](const CaseResult& cr) {
                       return cr.expected_outcome == ExpectedOutcome::Fail ||
                              case_passes(cr, pass_rate);
                     });
}

}  // namespace toybox

#endif  // TOYBOX_HARNESS_HPP_
