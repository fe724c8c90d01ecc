#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "innk/errors.hpp"
#include "innk/game.hpp"

namespace innk::server {

// Wire protocol: one JSON object per text frame, discriminated by "type".
// Encoders emit compact JSON with keys in a fixed order so that message logs
// are byte-stable.

inline constexpr std::size_t kMaxNameLength = 32;
inline constexpr std::size_t kMaxGuessLength = 64;
inline constexpr std::size_t kMaxStrokePoints = 2048;

/// Rejected inbound frame. `code` is the machine-readable error code sent back
/// in the `error` message.
class ProtocolError : public Error {
 public:
  ProtocolError(std::string code, const std::string& message)
      : Error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct CreateRoomMsg {};
struct JoinMsg {
  std::string room;
  std::string name;
};
struct StartMatchMsg {};
struct StrokeMsg {
  Stroke stroke;
};
struct GuessMsg {
  std::string word;
};

using Inbound = std::variant<CreateRoomMsg, JoinMsg, StartMatchMsg, StrokeMsg, GuessMsg>;

/// Validates a frame against its schema. Throws ProtocolError with code
/// `bad_message` or `unknown_type`.
Inbound parse_inbound(std::string_view frame);

/// "p<id>" for humans, "nn" for the classifier.
std::string wire_player_id(PlayerId id);

struct RosterEntry {
  PlayerId id;
  std::string name;
};

struct Score {
  std::size_t humans = 0;
  std::size_t nn = 0;
};

namespace encode {

std::string room_created(std::string_view room);
std::string joined(PlayerId player, const std::vector<RosterEntry>& roster);
std::string left(PlayerId player, const std::vector<RosterEntry>& roster);
std::string role(Role role);
std::string round_start(std::size_t round, Timestamp deadline, double ink_budget, double threshold);
std::string code_word(std::string_view word);
std::string stroke(const Stroke& stroke, bool truncated);
std::string ink_update(double used, double budget);
std::string nn_confidence(const std::optional<std::string>& word, double confidence);
std::string guess_result(PlayerId by, std::string_view word, bool correct);
std::string countdown_restarted(Timestamp deadline);
std::string round_end(std::size_t round, Side winner, std::string_view word, Score score);
std::string round_aborted(std::size_t round);
std::string match_end(Side winner, Score score);
std::string error(std::string_view code, std::string_view message);

}  // namespace encode

}  // namespace innk::server
