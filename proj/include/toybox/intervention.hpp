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

#ifndef TOYBOX_INTERVENTION_HPP_
#define TOYBOX_INTERVENTION_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "toybox/breakout.hpp"
#include "toybox/config.hpp"
#include "toybox/errors.hpp"

namespace toybox {

inline constexpr std::string_view kSchemaVersion = "toybox-breakout/1";

// Canonical, lossless snapshot of a game: the configuration that gives the
// state its meaning plus every state field.
struct StateDocument {
  std::string schema_version{kSchemaVersion};
  GameConfig config;
  GameState state;

  friend bool operator==(const StateDocument&, const StateDocument&) = default;
};

namespace detail {

using Json = nlohmann::json;

inline std::string format_real(double v) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), snap(v), std::chars_format::fixed, 9);
  return std::string(buf, end);
}

inline std::string format_hex64(std::uint64_t v) {
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[v & 0xF];
    v >>= 4;
  }
  return std::string(buf, 16);
}

inline std::string format_color(std::uint32_t rgb) {
  return "#" + format_hex64(rgb).substr(10);
}

// Reads JSON values with errors tagged by their field path.
class Reader {
 public:
  Reader(const Json& node, std::string path)
      : node_(node), path_(std::move(path)) {}

  bool has(const char* key) const { return node_.contains(key); }

  Reader at(const char* key) const {
    if (!node_.is_object() || !node_.contains(key)) {
      throw FieldError(child(key), "missing");
    }
    return Reader(node_.at(key), child(key));
  }

  const Json& json() const { return node_; }
  const std::string& path() const { return path_; }

  std::int64_t integer() const {
    if (!node_.is_number_integer()) throw FieldError(path_, "expected integer");
    return node_.get<std::int64_t>();
  }

  bool boolean() const {
    if (!node_.is_boolean()) throw FieldError(path_, "expected boolean");
    return node_.get<bool>();
  }

  std::string string() const {
    if (!node_.is_string()) throw FieldError(path_, "expected string");
    return node_.get<std::string>();
  }

  // Reals are canonically decimal strings; bare JSON numbers are accepted
  // from hand-written documents. Either way the value lands on the 1e-9 grid.
  double real() const {
    if (node_.is_number()) return snap(node_.get<double>());
    const std::string text = string();
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() ||
        !std::isfinite(v)) {
      throw FieldError(path_, "malformed decimal '" + text + "'");
    }
    return snap(v);
  }

  std::uint64_t hex64() const {
    const std::string text = string();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
    if (text.size() != 16 || ec != std::errc() ||
        ptr != text.data() + text.size()) {
      throw FieldError(path_, "expected 16 hex digits");
    }
    return v;
  }

  std::uint32_t color() const {
    const std::string text = string();
    std::uint32_t v = 0;
    auto [ptr, ec] =
        text.size() == 7 && text[0] == '#'
            ? std::from_chars(text.data() + 1, text.data() + text.size(), v, 16)
            : std::from_chars_result{text.data(), std::errc::invalid_argument};
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw FieldError(path_, "expected #rrggbb");
    }
    return v;
  }

  int int32() const {
    const std::int64_t v = integer();
    if (v < INT32_MIN || v > INT32_MAX) throw FieldError(path_, "out of range");
    return static_cast<int>(v);
  }

  template <typename F>
  void each(F&& f) const {
    if (!node_.is_array()) throw FieldError(path_, "expected array");
    for (std::size_t i = 0; i < node_.size(); ++i) {
      f(Reader(node_[i], path_ + "[" + std::to_string(i) + "]"));
    }
  }

  Vec2 vec2() const { return {at("x").real(), at("y").real()}; }

 private:
  std::string child(const char* key) const { return path_ + "." + key; }

  const Json& node_;
  std::string path_;
};

inline Json vec2_json(Vec2 v) {
  return Json{{"x", format_real(v.x)}, {"y", format_real(v.y)}};
}

}  // namespace detail

inline nlohmann::json config_to_json(const GameConfig& c) {
  using detail::format_color;
  using detail::format_real;
  nlohmann::json schedule = nlohmann::json::array();
  for (const SpeedStep& s : c.speedup_schedule) {
    schedule.push_back(
        {{"hit_count", s.hit_count}, {"multiplier", format_real(s.multiplier)}});
  }
  nlohmann::json colors = nlohmann::json::array();
  for (std::uint32_t rgb : c.row_colors) colors.push_back(format_color(rgb));
  return {
      {"grid_cols", c.grid_cols},
      {"grid_rows", c.grid_rows},
      {"row_points", c.row_points},
      {"field_width", c.field_width},
      {"field_height", c.field_height},
      {"wall_width", c.wall_width},
      {"ceiling_y", c.ceiling_y},
      {"brick_top_y", c.brick_top_y},
      {"brick_height", c.brick_height},
      {"paddle_width", c.paddle_width},
      {"paddle_height", c.paddle_height},
      {"paddle_y", c.paddle_y},
      {"paddle_speed", format_real(c.paddle_speed)},
      {"shrink_paddle_on_ceiling", c.shrink_paddle_on_ceiling},
      {"ball_size", c.ball_size},
      {"ball_speed", format_real(c.ball_speed)},
      {"speedup_schedule", schedule},
      {"default_launch_angle_deg", format_real(c.default_launch_angle_deg)},
      {"serve_y", c.serve_y},
      {"lives", c.lives},
      {"levels_to_win", c.levels_to_win},
      {"frames_per_second", c.frames_per_second},
      {"rng_seed", detail::format_hex64(c.rng_seed)},
      {"row_colors", colors},
      {"background_color", format_color(c.background_color)},
      {"wall_color", format_color(c.wall_color)},
      {"paddle_color", format_color(c.paddle_color)},
      {"ball_color", format_color(c.ball_color)},
      {"text_color", format_color(c.text_color)},
  };
}

// With `partial`, absent fields keep their defaults (config files); state
// documents require every field.
inline GameConfig config_from_json(const nlohmann::json& j, bool partial,
                                   const std::string& path = "config") {
  if (!j.is_object()) throw FieldError(path, "expected object");
  detail::Reader r(j, path);
  GameConfig c;
  auto field = [&](const char* key, auto&& assign) {
    if (partial && !r.has(key)) return;
    assign(r.at(key));
  };
  using R = detail::Reader;
  field("grid_cols", [&](const R& v) { c.grid_cols = v.int32(); });
  field("grid_rows", [&](const R& v) { c.grid_rows = v.int32(); });
  field("row_points", [&](const R& v) {
    c.row_points.clear();
    v.each([&](const R& e) { c.row_points.push_back(e.int32()); });
  });
  field("field_width", [&](const R& v) { c.field_width = v.int32(); });
  field("field_height", [&](const R& v) { c.field_height = v.int32(); });
  field("wall_width", [&](const R& v) { c.wall_width = v.int32(); });
  field("ceiling_y", [&](const R& v) { c.ceiling_y = v.int32(); });
  field("brick_top_y", [&](const R& v) { c.brick_top_y = v.int32(); });
  field("brick_height", [&](const R& v) { c.brick_height = v.int32(); });
  field("paddle_width", [&](const R& v) { c.paddle_width = v.int32(); });
  field("paddle_height", [&](const R& v) { c.paddle_height = v.int32(); });
  field("paddle_y", [&](const R& v) { c.paddle_y = v.int32(); });
  field("paddle_speed", [&](const R& v) { c.paddle_speed = v.real(); });
  field("shrink_paddle_on_ceiling",
        [&](const R& v) { c.shrink_paddle_on_ceiling = v.boolean(); });
  field("ball_size", [&](const R& v) { c.ball_size = v.int32(); });
  field("ball_speed", [&](const R& v) { c.ball_speed = v.real(); });
  field("speedup_schedule", [&](const R& v) {
    c.speedup_schedule.clear();
    v.each([&](const R& e) {
      c.speedup_schedule.push_back(
          {e.at("hit_count").int32(), e.at("multiplier").real()});
    });
  });
  field("default_launch_angle_deg",
        [&](const R& v) { c.default_launch_angle_deg = v.real(); });
  field("serve_y", [&](const R& v) { c.serve_y = v.int32(); });
  field("lives", [&](const R& v) { c.lives = v.int32(); });
  field("levels_to_win", [&](const R& v) { c.levels_to_win = v.int32(); });
  field("frames_per_second",
        [&](const R& v) { c.frames_per_second = v.int32(); });
  field("rng_seed", [&](const R& v) { c.rng_seed = v.hex64(); });
  field("row_colors", [&](const R& v) {
    c.row_colors.clear();
    v.each([&](const R& e) { c.row_colors.push_back(e.color()); });
  });
  field("background_color",
        [&](const R& v) { c.background_color = v.color(); });
  field("wall_color", [&](const R& v) { c.wall_color = v.color(); });
  field("paddle_color", [&](const R& v) { c.paddle_color = v.color(); });
  field("ball_color", [&](const R& v) { c.ball_color = v.color(); });
  field("text_color", [&](const R& v) { c.text_color = v.color(); });
  return c;
}

inline StateDocument export_state(const GameState& s, const GameConfig& c) {
  StateDocument doc;
  doc.config = c;
  doc.state = s;
  return doc;
}

inline nlohmann::json to_json(const StateDocument& doc) {
  using detail::format_real;
  const GameState& s = doc.state;
  nlohmann::json bricks = nlohmann::json::array();
  for (std::uint8_t alive : s.bricks_alive) bricks.push_back(alive != 0);
  return {
      {"schema_version", doc.schema_version},
      {"config", config_to_json(doc.config)},
      {"state",
       {
           {"frame", s.frame},
           {"score", s.score},
           {"lives_remaining", s.lives_remaining},
           {"level", s.level},
           {"bricks_alive", bricks},
           {"ball_pos", detail::vec2_json(s.ball_pos)},
           {"ball_vel", detail::vec2_json(s.ball_vel)},
           {"ball_in_play", s.ball_in_play},
           {"paddle_x", format_real(s.paddle_x)},
           {"paddle_shrunk", s.paddle_shrunk},
           {"ball_hit_count", s.ball_hit_count},
           {"rng_state", detail::format_hex64(s.rng_state)},
           {"lifecycle", std::string(to_string(s.lifecycle))},
       }},
  };
}

// Byte-canonical UTF-8 JSON: sorted keys, two-space indent, trailing newline.
inline std::string to_text(const StateDocument& doc) {
  return to_json(doc).dump(2) + "\n";
}

inline std::string export_text(const GameState& s, const GameConfig& c) {
  return to_text(export_state(s, c));
}

// Structural parse only; import_state performs the semantic validation.
inline StateDocument parse_document(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FieldError("document", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FieldError("document", "expected object");
  detail::Reader root(j, "document");
  StateDocument doc;
  doc.schema_version = root.at("schema_version").string();
  if (doc.schema_version != kSchemaVersion) {
    throw FieldError("schema_version", "unsupported '" + doc.schema_version +
                                           "', expected '" +
                                           std::string(kSchemaVersion) + "'");
  }
  doc.config = config_from_json(root.at("config").json(), /*partial=*/false);
  const detail::Reader st(root.at("state").json(), "state");
  GameState& s = doc.state;
  s.frame = st.at("frame").integer();
  s.score = st.at("score").integer();
  s.lives_remaining = st.at("lives_remaining").int32();
  s.level = st.at("level").int32();
  st.at("bricks_alive").each([&](const detail::Reader& e) {
    s.bricks_alive.push_back(e.boolean() ? 1 : 0);
  });
  s.ball_pos = st.at("ball_pos").vec2();
  s.ball_vel = st.at("ball_vel").vec2();
  s.ball_in_play = st.at("ball_in_play").boolean();
  s.paddle_x = st.at("paddle_x").real();
  s.paddle_shrunk = st.at("paddle_shrunk").boolean();
  s.ball_hit_count = st.at("ball_hit_count").int32();
  s.rng_state = st.at("rng_state").hex64();
  const std::string lifecycle = st.at("lifecycle").string();
  if (auto l = parse_lifecycle(lifecycle)) {
    s.lifecycle = *l;
  } else {
    throw FieldError("state.lifecycle", "unknown value '" + lifecycle + "'");
  }
  return doc;
}

// Checks every physical and bookkeeping invariant of `s` under `c`; throws
// FieldError naming the offending state field.
inline void validate_state(const GameConfig& c, const GameState& s) {
  auto require = [](bool ok, const char* field, const std::string& message) {
    if (!ok) throw FieldError(std::string("state.") + field, message);
  };
  require(s.frame >= 0, "frame", "must be non-negative");
  require(s.score >= 0, "score", "must be non-negative");
  require(s.lives_remaining >= 0 && s.lives_remaining <= c.lives,
          "lives_remaining", "must lie in [0, config.lives]");
  require(s.level >= 1 && s.level <= c.levels_to_win, "level",
          "must lie in [1, config.levels_to_win]");
  require(s.ball_hit_count >= 0, "ball_hit_count", "must be non-negative");
  require(static_cast<int>(s.bricks_alive.size()) == c.brick_count(),
          "bricks_alive", "must hold grid_rows * grid_cols entries");
  for (std::uint8_t b : s.bricks_alive) {
    require(b == 0 || b == 1, "bricks_alive", "entries must be 0 or 1");
  }
  require(!s.paddle_shrunk || c.shrink_paddle_on_ceiling,
          "paddle_shrunk", "paddle shrinking is disabled in this config");
  const auto [lo, hi] = paddle_range(c, s);
  require(s.paddle_x >= lo && s.paddle_x <= hi, "paddle_x",
          "paddle must lie fully between the walls");

  const int live = s.live_brick_count();
  switch (s.lifecycle) {
    case Lifecycle::Playing:
      require(s.lives_remaining >= 1, "lifecycle",
              "Playing requires at least one life");
      require(live > 0, "bricks_alive",
              "no live bricks while Playing: the level should have cleared");
      break;
    case Lifecycle::LifeLost:
      require(s.lives_remaining >= 1 && live > 0, "lifecycle",
              "LifeLost requires remaining lives and bricks");
      break;
    case Lifecycle::LevelCleared:
      require(live == 0 && s.level < c.levels_to_win, "lifecycle",
              "LevelCleared requires an empty wall before the final level");
      break;
    case Lifecycle::GameWon:
      require(live == 0 && s.level == c.levels_to_win, "lifecycle",
              "GameWon requires an empty wall on the final level");
      break;
    case Lifecycle::GameOver:
      require(s.lives_remaining == 0, "lifecycle",
              "GameOver requires zero lives");
      break;
  }

  if (!s.ball_in_play) {
    require(s.ball_vel == Vec2{}, "ball_vel",
            "must be zero while the ball is not in play");
    return;
  }
  require(s.lifecycle == Lifecycle::Playing, "ball_in_play",
          "a ball can only be in play while Playing");
  const double h = c.ball_size / 2.0;
  const Vec2 p = s.ball_pos;
  require(p.x - h >= c.interior_left() - detail::kTouch &&
              p.x + h <= c.interior_right() + detail::kTouch,
          "ball_pos", "ball must lie between the side walls");
  require(p.y - h >= c.ceiling_y - detail::kTouch && p.y + h <= c.field_height,
          "ball_pos", "ball must lie between the ceiling and the floor");
  const double expected = scheduled_speed(c, s.ball_hit_count);
  require(std::abs(norm(s.ball_vel) - expected) <= 1e-6 * expected,
          "ball_vel",
          "speed " + detail::format_real(norm(s.ball_vel)) +
              " inconsistent with scheduled speed " +
              detail::format_real(expected));
}

struct ImportedState {
  GameState state;
  GameConfig config;
};

inline ImportedState import_state(const StateDocument& doc) {
  if (doc.schema_version != kSchemaVersion) {
    throw FieldError("schema_version",
                     "unsupported '" + doc.schema_version + "'");
  }
  validate(doc.config);
  validate_state(doc.config, doc.state);
  return {doc.state, doc.config};
}

inline ImportedState import_text(std::string_view text) {
  return import_state(parse_document(text));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline GameConfig load_config_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FieldError("config", std::string("not valid JSON: ") + e.what());
  }
  GameConfig c = config_from_json(j, /*partial=*/true);
  validate(c);
  return c;
}

// --- Mutators. Each returns a copy in which only the named fields differ.

inline GameState set_brick(const GameConfig& c, GameState s, int row, int col,
                           bool alive) {
  if (row < 0 || row >= c.grid_rows) throw FieldError("row", "out of range");
  if (col < 0 || col >= c.grid_cols) throw FieldError("col", "out of range");
  if (s.lifecycle != Lifecycle::Playing) {
    throw LifecycleError("set_brick requires a Playing state");
  }
  std::uint8_t& cell = s.bricks_alive[brick_index(c, row, col)];
  if (!alive && cell && s.live_brick_count() == 1) {
    throw FieldError("alive", "cannot remove the last live brick while Playing");
  }
  cell = alive ? 1 : 0;
  return s;
}

// Places the ball at `pos` heading `angle_deg` counterclockwise from
// rightward (90 is straight up). The speed must equal the one the config
// schedules for the current hit count.
inline GameState set_ball(const GameConfig& c, GameState s, Vec2 pos,
                          double angle_deg, double speed) {
  if (!(speed > 0)) throw FieldError("speed", "must be positive");
  const double expected = scheduled_speed(c, s.ball_hit_count);
  if (std::abs(speed - expected) > 1e-9 * expected) {
    throw FieldError("speed", "must equal the scheduled ball speed " +
                                  detail::format_real(expected));
  }
  if (s.lifecycle != Lifecycle::Playing) {
    throw LifecycleError("set_ball requires a Playing state");
  }
  const double h = c.ball_size / 2.0;
  pos = detail::snap(pos);
  if (pos.x - h < c.interior_left() || pos.x + h > c.interior_right() ||
      pos.y - h < c.ceiling_y || pos.y + h > c.field_height) {
    throw FieldError("pos", "ball must lie inside the playfield");
  }
  const double a = detail::radians(angle_deg);
  s.ball_pos = pos;
  s.ball_vel = detail::snap(Vec2{speed * std::cos(a), -speed * std::sin(a)});
  s.ball_in_play = true;
  return s;
}

inline GameState set_paddle(const GameConfig& c, GameState s, double x) {
  x = detail::snap(x);
  const auto [lo, hi] = paddle_range(c, s);
  if (!(x >= lo && x <= hi)) {
    throw FieldError("x", "paddle must lie fully between the walls");
  }
  s.paddle_x = x;
  return s;
}

// --- Queries.

enum class SelectorKind {
  Score,
  Lives,
  Level,
  BallPos,
  BallVel,
  PaddleX,
  BricksAlive,
  Brick,
  LiveBrickCount
};

struct Selector {
  SelectorKind kind = SelectorKind::Score;
  int row = 0;
  int col = 0;
};

// Accepts score, lives, level, ball_pos, ball_vel, paddle_x, bricks_alive,
// live_brick_count and brick(row,col).
inline Selector parse_selector(std::string_view text) {
  static const std::pair<std::string_view, SelectorKind> kNames[] = {
      {"score", SelectorKind::Score},
      {"lives", SelectorKind::Lives},
      {"level", SelectorKind::Level},
      {"ball_pos", SelectorKind::BallPos},
      {"ball_vel", SelectorKind::BallVel},
      {"paddle_x", SelectorKind::PaddleX},
      {"bricks_alive", SelectorKind::BricksAlive},
      {"live_brick_count", SelectorKind::LiveBrickCount},
  };
  for (const auto& [name, kind] : kNames) {
    if (text == name) return {kind};
  }
  if (text.starts_with("brick(") && text.ends_with(")")) {
    std::string_view args = text.substr(6, text.size() - 7);
    const auto comma = args.find(',');
    Selector sel{SelectorKind::Brick};
    if (comma != std::string_view::npos) {
      auto r = std::from_chars(args.data(), args.data() + comma, sel.row);
      auto c = std::from_chars(args.data() + comma + 1,
                               args.data() + args.size(), sel.col);
      if (r.ec == std::errc() && r.ptr == args.data() + comma &&
          c.ec == std::errc() && c.ptr == args.data() + args.size()) {
        return sel;
      }
    }
  }
  throw FieldError("selector", "unknown selector '" + std::string(text) + "'");
}

using QueryValue =
    std::variant<std::int64_t, double, bool, Vec2, std::vector<std::uint8_t>>;

inline QueryValue query(const GameConfig& c, const GameState& s,
                        const Selector& sel) {
  switch (sel.kind) {
    case SelectorKind::Score: return s.score;
    case SelectorKind::Lives: return std::int64_t{s.lives_remaining};
    case SelectorKind::Level: return std::int64_t{s.level};
    case SelectorKind::BallPos: return s.ball_pos;
    case SelectorKind::BallVel: return s.ball_vel;
    case SelectorKind::PaddleX: return s.paddle_x;
    case SelectorKind::BricksAlive: return s.bricks_alive;
    case SelectorKind::LiveBrickCount:
      return std::int64_t{s.live_brick_count()};
    case SelectorKind::Brick:
      if (sel.row < 0 || sel.row >= c.grid_rows || sel.col < 0 ||
          sel.col >= c.grid_cols) {
        throw FieldError("selector", "brick index out of range");
      }
      return s.bricks_alive[brick_index(c, sel.row, sel.col)] != 0;
  }
  throw FieldError("selector", "unknown selector");
}

inline QueryValue query(const GameConfig& c, const GameState& s,
                        std::string_view selector) {
  return query(c, s, parse_selector(selector));
}

inline nlohmann::json query_json(const GameConfig& c, const GameState& s,
                                 std::string_view selector) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Vec2>) {
          return detail::vec2_json(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return detail::format_real(v);
        } else if constexpr (std::is_same_v<T, std::vector<std::uint8_t>>) {
          nlohmann::json a = nlohmann::json::array();
          for (std::uint8_t b : v) a.push_back(b != 0);
          return a;
        } else {
          return v;
        }
      },
      query(c, s, selector));
}

}  // namespace toybox

#endif  // TOYBOX_INTERVENTION_HPP_
