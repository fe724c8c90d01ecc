#include "innk/tools/match_config_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "innk/errors.hpp"
#include "innk/words.hpp"

namespace innk::tools {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ArgumentError("bad number '" + v + "'");
  return out;
}

double parse_real(const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ArgumentError("bad number '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(d)) throw ArgumentError("bad number '" + v + "'");
  return d;
}

Millis seconds(const std::string& v) {
  const double s = parse_real(v);
  if (s <= 0) throw ArgumentError("duration must be positive");
  return Millis{static_cast<std::int64_t>(std::llround(s * 1000.0))};
}

void apply(server::ServerConfig& cfg, const std::string& key, const std::string& value) {
  auto& match = cfg.room.match;
  if (key == "rounds") {
    match.rounds_to_play = parse_number<std::size_t>(value);
  } else if (key == "round_seconds") {
    match.round_duration = seconds(value);
  } else if (key == "threshold") {
    match.confidence_threshold = parse_real(value);
  } else if (key == "ink_multiplier") {
    match.ink_multiplier = parse_real(value);
  } else if (key == "words") {
    match.category_words.clear();
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      const auto word = canonical_word(trim(value.substr(start, comma - start)));
      if (!word.empty()) match.category_words.push_back(word);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(value);
    match.rng_seed = cfg.seed;
  } else if (key == "intermission_seconds") {
    const double s = parse_real(value);
    if (s < 0) throw ArgumentError("intermission must not be negative");
    cfg.room.intermission = Millis{static_cast<std::int64_t>(std::llround(s * 1000.0))};
  } else if (key == "nn_schedule") {
    if (value == "per_stroke") {
      cfg.room.nn_schedule = server::NnSchedule::PerStroke;
    } else if (value == "per_point") {
      cfg.room.nn_schedule = server::NnSchedule::PerPoint;
    } else {
      throw ArgumentError("nn_schedule must be per_stroke or per_point");
    }
  } else if (key == "max_players") {
    cfg.room.max_players = parse_number<std::size_t>(value);
    if (cfg.room.max_players < 2) throw ArgumentError("max_players must be at least 2");
  } else if (key == "max_rooms") {
    cfg.max_rooms = parse_number<std::size_t>(value);
    if (cfg.max_rooms == 0) throw ArgumentError("max_rooms must be positive");
  } else {
    throw ArgumentError("unknown key '" + key + "'");
  }
}

}  // namespace

server::ServerConfig parse_config(std::istream& in, const std::string& source,
                                  server::ServerConfig base) {
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const auto where = source + ":" + std::to_string(n) + ": ";
    if (eq == std::string::npos) throw ArgumentError(where + "expected key = value");
    try {
      apply(base, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const ArgumentError& e) {
      throw ArgumentError(where + e.what());
    }
  }
  try {
    base.room.match.validate();
  } catch (const ArgumentError& e) {
    throw ArgumentError(source + ": " + e.what());
  }
  return base;
}

server::ServerConfig load_config(const std::filesystem::path& path, server::ServerConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_config(in, path.string(), std::move(base));
}

}  // namespace innk::tools
