#include "innk/server/protocol.hpp"

#include <cmath>

#include <json.hpp>

namespace innk::server {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& message) { throw ProtocolError("bad_message", message); }

const json& field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const json& obj, const char* name, std::size_t max_len) {
  const json& v = field(obj, name);
  if (!v.is_string()) bad(std::string("'") + name + "' must be a string");
  auto s = v.get<std::string>();
  if (s.find_first_not_of(" \t\r\n") == std::string::npos) bad(std::string("'") + name + "' is empty");
  if (s.size() > max_len) bad(std::string("'") + name + "' is too long");
  return s;
}

Stroke parse_points(const json& obj) {
  const json& pts = field(obj, "points");
  if (!pts.is_array() || pts.empty()) bad("'points' must be a non-empty array");
  if (pts.size() > kMaxStrokePoints) bad("too many points in stroke");
  Stroke s;
  s.points.reserve(pts.size());
  for (const auto& p : pts) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      bad("each point must be [x, y]");
    }
    const double x = p[0].get<double>();
    const double y = p[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y)) bad("non-finite coordinate");
    s.points.push_back({x, y});
  }
  return s;
}

ordered_json message(const char* type) {
  ordered_json j;
  j["type"] = type;
  return j;
}

ordered_json roster_json(const std::vector<RosterEntry>& roster) {
  auto arr = ordered_json::array();
  for (const auto& r : roster) {
    ordered_json e;
    e["id"] = wire_player_id(r.id);
    e["name"] = r.name;
    arr.push_back(std::move(e));
  }
  return arr;
}

ordered_json score_json(Score score) {
  ordered_json s;
  s["humans"] = score.humans;
  s["nn"] = score.nn;
  return s;
}

}  // namespace

Inbound parse_inbound(std::string_view frame) {
  json obj;
  try {
    obj = json::parse(frame);
  } catch (const json::parse_error&) {
    bad("frame is not valid JSON");
  }
  if (!obj.is_object()) bad("frame must be a JSON object");
  auto type_it = obj.find("type");
  if (type_it == obj.end() || !type_it->is_string()) bad("missing string field 'type'");
  const auto type = type_it->get<std::string>();

  if (type == "create_room") return CreateRoomMsg{};
  if (type == "join") {
    return JoinMsg{string_field(obj, "room", 16), string_field(obj, "name", kMaxNameLength)};
  }
  if (type == "start_match") return StartMatchMsg{};
  if (type == "stroke") return StrokeMsg{parse_points(obj)};
  if (type == "guess") return GuessMsg{string_field(obj, "word", kMaxGuessLength)};
  throw ProtocolError("unknown_type", "unknown message type '" + type + "'");
}

std::string wire_player_id(PlayerId id) {
  return id == kNnPlayer ? std::string("nn") : "p" + std::to_string(id.value);
}

namespace encode {

std::string room_created(std::string_view room) {
  auto j = message("room_created");
  j["room"] = room;
  return j.dump();
}

std::string joined(PlayerId player, const std::vector<RosterEntry>& roster) {
  auto j = message("joined");
  j["player_id"] = wire_player_id(player);
  j["roster"] = roster_json(roster);
  return j.dump();
}

std::string left(PlayerId player, const std::vector<RosterEntry>& roster) {
  auto j = message("left");
  j["player_id"] = wire_player_id(player);
  j["roster"] = roster_json(roster);
  return j.dump();
}

std::string role(Role r) {
  auto j = message("role");
  j["role"] = to_string(r);
  return j.dump();
}

std::string round_start(std::size_t round, Timestamp deadline, double ink_budget,
                        double threshold) {
  auto j = message("round_start");
  j["round"] = round;
  j["deadline"] = to_ms(deadline);
  j["ink_budget"] = ink_budget;
  j["threshold"] = threshold;
  return j.dump();
}

std::string code_word(std::string_view word) {
  auto j = message("code_word");
  j["word"] = word;
  return j.dump();
}

std::string stroke(const Stroke& s, bool truncated) {
  auto j = message("stroke");
  auto pts = ordered_json::array();
  for (const auto& p : s.points) pts.push_back({p.x, p.y});
  j["points"] = std::move(pts);
  j["truncated"] = truncated;
  return j.dump();
}

std::string ink_update(double used, double budget) {
  auto j = message("ink_update");
  j["used"] = used;
  j["budget"] = budget;
  return j.dump();
}

std::string nn_confidence(const std::optional<std::string>& word, double confidence) {
  auto j = message("nn_confidence");
  j["word"] = word ? ordered_json(*word) : ordered_json(nullptr);
  j["confidence"] = confidence;
  j["percent"] = std::lround(confidence * 100.0);
  return j.dump();
}

std::string guess_result(PlayerId by, std::string_view word, bool correct) {
  auto j = message("guess_result");
  j["by"] = wire_player_id(by);
  j["word"] = word;
  j["correct"] = correct;
  return j.dump();
}

std::string countdown_restarted(Timestamp deadline) {
  auto j = message("countdown_restarted");
  j["deadline"] = to_ms(deadline);
  return j.dump();
}

std::string round_end(std::size_t round, Side winner, std::string_view word, Score score) {
  auto j = message("round_end");
  j["round"] = round;
  j["winner"] = to_string(winner);
  j["word"] = word;
  j["score"] = score_json(score);
  return j.dump();
}

std::string round_aborted(std::size_t round) {
  auto j = message("round_aborted");
  j["round"] = round;
  return j.dump();
}

std::string match_end(Side winner, Score score) {
  auto j = message("match_end");
  j["winner"] = to_string(winner);
  j["score"] = score_json(score);
  return j.dump();
}

std::string error(std::string_view code, std::string_view message_text) {
  auto j = message("error");
  j["code"] = code;
  j["message"] = message_text;
  return j.dump();
}

}  // namespace encode

}  // namespace innk::server
