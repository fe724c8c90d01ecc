#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "innk/classifier.hpp"
#include "innk/dataset.hpp"
#include "innk/game.hpp"
#include "innk/server/protocol.hpp"

namespace innk::server {

using SessionId = std::uint64_t;

struct Outbound {
  SessionId to = 0;
  std::string frame;

  friend bool operator==(const Outbound&, const Outbound&) = default;
};

enum class NnSchedule { PerStroke, PerPoint };

struct RoomConfig {
  MatchConfig match;
  /// Pause between a round ending and the next one being dealt.
  Millis intermission{5'000};
  NnSchedule nn_schedule = NnSchedule::PerStroke;
  std::size_t max_players = 16;
};

/// One game room. Every entry point is a synchronous transition that returns
/// the frames to deliver, in order; the caller owns serialization.
class Room {
 public:
  Room(std::string code, std::shared_ptr<const Classifier> classifier,
       std::shared_ptr<const InkBudgetTable> budgets, RoomConfig config);

  const std::string& code() const noexcept { return code_; }
  Phase phase() const noexcept;
  bool empty() const noexcept { return members_.empty(); }
  bool contains(SessionId session) const;
  const std::optional<Match>& match() const noexcept { return match_; }
  std::optional<PlayerId> player_of(SessionId session) const;

  std::vector<Outbound> join(SessionId session, std::string name, Timestamp now);
  std::vector<Outbound> start_match(SessionId session, Timestamp now);
  std::vector<Outbound> stroke(SessionId session, const Stroke& stroke, Timestamp now);
  std::vector<Outbound> guess(SessionId session, std::string_view word, Timestamp now);
  std::vector<Outbound> run_timers(Timestamp now);
  std::vector<Outbound> disconnect(SessionId session, Timestamp now);

 private:
  struct Member {
    SessionId session;
    PlayerId id;
    std::string name;
  };

  std::vector<RosterEntry> roster() const;
  void broadcast(std::vector<Outbound>& out, const std::string& frame) const;
  void deal_round(std::vector<Outbound>& out, Timestamp now);
  void announce_round(std::vector<Outbound>& out);
  void catch_up(std::vector<Outbound>& out, SessionId session);
  void run_nn(std::vector<Outbound>& out, Timestamp now, std::optional<std::size_t> visible);
  void report_guess(std::vector<Outbound>& out, PlayerId by, const GuessOutcome& outcome,
                    Timestamp now);
  Score score() const;
  const Member* member(SessionId session) const;

  std::string code_;
  std::shared_ptr<const Classifier> classifier_;
  std::shared_ptr<const InkBudgetTable> budgets_;
  RoomConfig config_;
  std::vector<Member> members_;
  std::uint32_t next_player_ = 1;
  std::uint64_t matches_started_ = 0;
  std::optional<Match> match_;
  Timestamp next_round_at_;
};

}  // namespace innk::server
