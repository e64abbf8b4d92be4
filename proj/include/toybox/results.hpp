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

#ifndef TOYBOX_RESULTS_HPP_
#define TOYBOX_RESULTS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "toybox/harness.hpp"
#include "toybox/intervention.hpp"

namespace toybox {

// Output schema, stable across releases:
//
//   trials.csv   one row per trial: case_id, requirement, row, col,
//                angle_deg, trial, seed, outcome, frames_used,
//                agent_steps_used, final_score
//   cases.csv    one row per case with every CaseAggregates column
//   heatmap.csv  R1/R3 only, keyed by (row, col): reciprocal_median is
//                1 / median agent steps, failures counted at the budget
//   angles.csv   R2 only: per-angle score distribution
//   results.json everything above in one document
//
// Reals are written with nine decimals. Empty CSV cells mean "not
// applicable" (e.g. angle_deg on a brick case).
inline constexpr std::string_view kResultsSchema = "toybox-results/1";

enum class ResultFormat : unsigned { Csv = 1, Json = 2, Both = 3 };

namespace detail {

inline std::string opt_int(const std::optional<BrickCell>& cell, bool row) {
  if (!cell) return "";
  return std::to_string(row ? cell->row : cell->col);
}

inline std::string opt_real(const std::optional<double>& v) {
  return v ? format_real(*v) : "";
}

inline std::string expected_label(const std::optional<ExpectedOutcome>& e) {
  if (!e) return "";
  return *e == ExpectedOutcome::Pass ? "pass" : "fail";
}

}  // namespace detail

inline std::string trials_csv(const SuiteResult& r) {
  std::string out =
      "case_id,requirement,row,col,angle_deg,trial,seed,outcome,frames_used,"
      "agent_steps_used,final_score\n";
  for (const CaseResult& c : r.cases) {
    for (const TrialResult& t : c.trials) {
      out += c.case_id + "," + std::string(to_string(c.requirement)) + "," +
             detail::opt_int(c.cell, true) + "," +
             detail::opt_int(c.cell, false) + "," +
             detail::opt_real(c.angle_deg) + "," + std::to_string(t.trial) +
             "," + std::to_string(t.seed) + "," +
             std::string(to_string(t.outcome)) + "," +
             std::to_string(t.frames_used) + "," +
             std::to_string(t.agent_steps_used) + "," +
             std::to_string(t.final_score) + "\n";
    }
  }
  return out;
}

inline std::string cases_csv(const SuiteResult& r) {
  using detail::format_real;
  std::string out =
      "case_id,requirement,row,col,angle_deg,expected_outcome,trials,"
      "budget_frames,success_rate,median_steps,reciprocal_median,"
      "median_frames,reciprocal_median_frames,mean_score,max_score,"
      "median_score,p25_score,p75_score\n";
  for (const CaseResult& c : r.cases) {
    const CaseAggregates& a = c.aggregates;
    out += c.case_id + "," + std::string(to_string(c.requirement)) + "," +
           detail::opt_int(c.cell, true) + "," +
           detail::opt_int(c.cell, false) + "," +
           detail::opt_real(c.angle_deg) + "," +
           detail::expected_label(c.expected_outcome) + "," +
           std::to_string(c.trials.size()) + "," +
           std::to_string(c.budget_frames) + "," + format_real(a.success_rate) +
           "," + format_real(a.median_steps) + "," +
           format_real(a.reciprocal_median) + "," +
           format_real(a.median_frames) + "," +
           format_real(a.reciprocal_median_frames) + "," +
           format_real(a.mean_score) + "," + format_real(a.max_score) + "," +
           format_real(a.median_score) + "," +
           format_real(a.percentile25_score) + "," +
           format_real(a.percentile75_score) + "\n";
  }
  return out;
}

inline std::string heatmap_csv(const SuiteResult& r) {
  using detail::format_real;
  std::string out =
      "row,col,case_id,reciprocal_median,median_steps,median_frames,"
      "success_rate\n";
  for (const CaseResult& c : r.cases) {
    if (!c.cell) continue;
    const CaseAggregates& a = c.aggregates;
    out += std::to_string(c.cell->row) + "," + std::to_string(c.cell->col) +
           "," + c.case_id + "," + format_real(a.reciprocal_median) + "," +
           format_real(a.median_steps) + "," + format_real(a.median_frames) +
           "," + format_real(a.success_rate) + "\n";
  }
  return out;
}

inline std::string angles_csv(const SuiteResult& r) {
  using detail::format_real;
  std::string out =
      "angle_deg,case_id,expected_outcome,mean_score,max_score,median_score,"
      "p25_score,p75_score,success_rate\n";
  for (const CaseResult& c : r.cases) {
    if (!c.angle_deg) continue;
    const CaseAggregates& a = c.aggregates;
    out += format_real(*c.angle_deg) + "," + c.case_id + "," +
           detail::expected_label(c.expected_outcome) + "," +
           format_real(a.mean_score) + "," + format_real(a.max_score) + "," +
           format_real(a.median_score) + "," +
           format_real(a.percentile25_score) + "," +
           format_real(a.percentile75_score) + "," +
           format_real(a.success_rate) + "\n";
  }
  return out;
}

inline nlohmann::json results_json(const SuiteResult& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const CaseResult& c : r.cases) {
    const CaseAggregates& a = c.aggregates;
    nlohmann::json trials = nlohmann::json::array();
    for (const TrialResult& t : c.trials) {
      trials.push_back({{"trial", t.trial},
                        {"seed", t.seed},
                        {"outcome", std::string(to_string(t.outcome))},
                        {"frames_used", t.frames_used},
                        {"agent_steps_used", t.agent_steps_used},
                        {"final_score", t.final_score}});
    }
    nlohmann::json j = {
        {"case_id", c.case_id},
        {"requirement", std::string(to_string(c.requirement))},
        {"budget_frames", c.budget_frames},
        {"success_rate", a.success_rate},
        {"median_steps", a.median_steps},
        {"reciprocal_median", a.reciprocal_median},
        {"median_frames", a.median_frames},
        {"reciprocal_median_frames", a.reciprocal_median_frames},
        {"mean_score", a.mean_score},
        {"max_score", a.max_score},
        {"median_score", a.median_score},
        {"p25_score", a.percentile25_score},
        {"p75_score", a.percentile75_score},
        {"trials", trials},
    };
    if (c.cell) {
      j["row"] = c.cell->row;
      j["col"] = c.cell->col;
    }
    if (c.angle_deg) j["angle_deg"] = *c.angle_deg;
    if (c.expected_outcome) {
      j["expected_outcome"] = detail::expected_label(c.expected_outcome);
    }
    cases.push_back(std::move(j));
  }
  return {{"schema", std::string(kResultsSchema)},
          {"agent", r.agent_name},
          {"base_seed", r.base_seed},
          {"trials_per_case", r.trials},
          {"frame_skip", r.frame_skip},
          {"failure_step_policy", "Death/Timeout trials count as the budget"},
          {"cases", cases}};
}

// Writes the tables into `dir` (created if needed); returns the paths written.
inline std::vector<std::filesystem::path> emit_results(
    const SuiteResult& r, const std::filesystem::path& dir,
    ResultFormat format = ResultFormat::Both) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto put = [&](const char* name, const std::string& contents) {
    const auto path = dir / name;
    write_file(path.string(), contents);
    written.push_back(path);
  };
  const auto bits = static_cast<unsigned>(format);
  if (bits & static_cast<unsigned>(ResultFormat::Csv)) {
    put("trials.csv", trials_csv(r));
    put("cases.csv", cases_csv(r));
    const bool has_cells = std::any_of(r.cases.begin(), r.cases.end(),
                                       [](const CaseResult& c) { return c.cell.has_value(); });
    const bool has_angles =
        std::any_of(r.cases.begin(), r.cases.end(),
                    [](const CaseResult& c) { return c.angle_deg.has_value(); });
    if (has_cells) put("heatmap.csv", heatmap_csv(r));
    if (has_angles) put("angles.csv", angles_csv(r));
  }
  if (bits & static_cast<unsigned>(ResultFormat::Json)) {
    put("results.json", results_json(r).dump(2) + "\n");
  }
  return written;
}

}  // namespace toybox

#endif  // TOYBOX_RESULTS_HPP_
