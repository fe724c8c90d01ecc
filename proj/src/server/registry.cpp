#include "innk/server/registry.hpp"

#include <cctype>

namespace innk::server {

namespace {

constexpr std::string_view kCodeAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

std::string upper(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

RoomRegistry::RoomRegistry(std::shared_ptr<const Classifier> classifier, InkBudgetTable budgets,
                           ServerConfig config)
    : classifier_(std::move(classifier)),
      budgets_(std::make_shared<const InkBudgetTable>(std::move(budgets))),
      config_(std::move(config)),
      rng_(config_.seed) {}

std::string RoomRegistry::create_room(Timestamp now) {
  if (!classifier_) throw StateError("no classifier loaded");
  if (rooms_.size() >= config_.max_rooms) throw CapacityError("room limit reached");
  std::string code;
  do {
    code.clear();
    for (std::size_t i = 0; i < kRoomCodeLength; ++i) {
      code.push_back(kCodeAlphabet[rng_.below(kCodeAlphabet.size())]);
    }
  } while (rooms_.contains(code));
  rooms_.emplace(code, Room(code, classifier_, budgets_, config_.room));
  unclaimed_.emplace(code, now);
  return code;
}

const Room* RoomRegistry::find_room(std::string_view code) const {
  auto it = rooms_.find(code);
  return it == rooms_.end() ? nullptr : &it->second;
}

const Room* RoomRegistry::room_of(SessionId session) const {
  auto it = session_room_.find(session);
  return it == session_room_.end() ? nullptr : find_room(it->second);
}

std::vector<Outbound> RoomRegistry::handle_message(SessionId session, std::string_view frame,
                                                   Timestamp now) {
  Inbound msg;
  try {
    msg = parse_inbound(frame);
  } catch (const ProtocolError& e) {
    return {{session, encode::error(e.code(), e.what())}};
  }

  if (std::holds_alternative<CreateRoomMsg>(msg)) {
    try {
      return {{session, encode::room_created(create_room(now))}};
    } catch (const CapacityError& e) {
      return {{session, encode::error("capacity", e.what())}};
    } catch (const StateError& e) {
      return {{session, encode::error("no_classifier", e.what())}};
    }
  }

  if (const auto* join = std::get_if<JoinMsg>(&msg)) {
    if (session_room_.contains(session)) {
      return {{session, encode::error("already_in_room", "leave the current room first")}};
    }
    const std::string code = upper(join->room);
    auto it = rooms_.find(code);
    if (it == rooms_.end()) return {{session, encode::error("unknown_room", "no room " + code)}};
    auto out = it->second.join(session, join->name, now);
    if (it->second.contains(session)) {
      session_room_.emplace(session, code);
      unclaimed_.erase(code);
    }
    return out;
  }

  auto where = session_room_.find(session);
  if (where == session_room_.end()) {
    return {{session, encode::error("not_in_room", "join a room first")}};
  }
  Room& room = rooms_.at(where->second);
  if (std::holds_alternative<StartMatchMsg>(msg)) return room.start_match(session, now);
  if (const auto* s = std::get_if<StrokeMsg>(&msg)) return room.stroke(session, s->stroke, now);
  return room.guess(session, std::get<GuessMsg>(msg).word, now);
}

std::vector<Outbound> RoomRegistry::run_timers(Timestamp now) {
  for (auto it = unclaimed_.begin(); it != unclaimed_.end();) {
    if (now - it->second >= config_.empty_room_ttl) {
      rooms_.erase(it->first);
      it = unclaimed_.erase(it);
    } else {
      ++it;
    }
  }
  std::vector<Outbound> out;
  for (auto& [code, room] : rooms_) {
    auto part = room.run_timers(now);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

std::vector<Outbound> RoomRegistry::disconnect(SessionId session, Timestamp now) {
  auto where = session_room_.find(session);
  if (where == session_room_.end()) return {};
  const std::string code = where->second;
  session_room_.erase(where);
  auto it = rooms_.find(code);
  auto out = it->second.disconnect(session, now);
  if (it->second.empty()) rooms_.erase(it);
  return out;
}

}  // namespace innk::server
