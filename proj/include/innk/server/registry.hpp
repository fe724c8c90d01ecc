#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "innk/rng.hpp"
#include "innk/server/room.hpp"

namespace innk::server {

inline constexpr std::size_t kRoomCodeLength = 6;

struct ServerConfig {
  RoomConfig room;
  std::size_t max_rooms = 256;
  /// Seeds room-code generation.
  std::uint64_t seed = 0;
  /// Rooms nobody joined are dropped after this long.
  Millis empty_room_ttl{60'000};
};

/// All live rooms plus the session -> room routing table. Transport
/// independent: frames in, addressed frames out. Not thread-safe; the
/// transport serializes calls.
class RoomRegistry {
 public:
  /// A null classifier is allowed so that a misconfigured server still
  /// answers; create_room then fails.
  RoomRegistry(std::shared_ptr<const Classifier> classifier, InkBudgetTable budgets,
               ServerConfig config);

  /// Registers an empty room and returns its code. Throws StateError without
  /// a classifier and CapacityError at the room limit.
  std::string create_room(Timestamp now = {});

  std::vector<Outbound> handle_message(SessionId session, std::string_view frame, Timestamp now);
  std::vector<Outbound> run_timers(Timestamp now);
  std::vector<Outbound> disconnect(SessionId session, Timestamp now);

  std::size_t room_count() const noexcept { return rooms_.size(); }
  const Room* find_room(std::string_view code) const;
  const Room* room_of(SessionId session) const;

 private:
  std::shared_ptr<const Classifier> classifier_;
  std::shared_ptr<const InkBudgetTable> budgets_;
  ServerConfig config_;
  Rng rng_;
  std::map<std::string, Room, std::less<>> rooms_;
  std::unordered_map<SessionId, std::string> session_room_;
  std::map<std::string, Timestamp, std::less<>> unclaimed_;
};

}  // namespace innk::server
