#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "innk/classifier.hpp"
#include "innk/dataset.hpp"
#include "innk/rng.hpp"
#include "innk/stroke.hpp"

namespace innk {

/// Millisecond clock whose time points are supplied by the caller. The state
/// machine never reads a real clock; the server feeds it Unix-epoch times and
/// tests feed it whatever they like.
struct GameClock {
  using rep = std::int64_t;
  using period = std::milli;
  using duration = std::chrono::duration<rep, period>;
  using time_point = std::chrono::time_point<GameClock>;
  static constexpr bool is_steady = false;
};
using Timestamp = GameClock::time_point;
using Millis = GameClock::duration;

constexpr Timestamp at_ms(std::int64_t ms) { return Timestamp{Millis{ms}}; }
constexpr std::int64_t to_ms(Timestamp t) { return t.time_since_epoch().count(); }

struct PlayerId {
  std::uint32_t value = 0;

  friend auto operator<=>(const PlayerId&, const PlayerId&) = default;
};

/// The classifier's seat at the table. Human ids start at 1.
inline constexpr PlayerId kNnPlayer{0};

enum class Side { Humans, NN };
enum class Role { Sketcher, Guesser };
enum class Phase { Lobby, InRound, BetweenRounds, Finished };

const char* to_string(Side side);
const char* to_string(Role role);
const char* to_string(Phase phase);

struct MatchConfig {
  std::size_t rounds_to_play = 5;
  Millis round_duration{30'000};
  double confidence_threshold = kDefaultConfidenceThreshold;
  double ink_multiplier = kDefaultInkMultiplier;
  /// Playable code words. Empty means every classifier category.
  std::vector<std::string> category_words;
  std::uint64_t rng_seed = 0;

  /// Throws ArgumentError on an even or zero round count, a non-positive
  /// duration, a threshold outside [0, 1] or a non-positive multiplier.
  void validate() const;
};

struct RoundState {
  std::size_t round_number = 0;
  std::string code_word;
  PlayerId sketcher;
  Drawing drawing;
  double ink_used = 0.0;
  double ink_budget = 0.0;
  GuessLedger ledger;
  Timestamp deadline;
  std::optional<Side> winner;
  /// Bumped on every accepted stroke; identifies a drawing state.
  std::uint64_t revision = 0;
};

struct RoundResult {
  std::size_t round_number = 0;
  Side winner = Side::Humans;
  std::string code_word;
  Timestamp ended_at;
};

struct StrokeOutcome {
  bool accepted = false;
  bool truncated = false;
  Stroke stroke;  ///< what was appended (empty when rejected)
  double ink_used = 0.0;
  double ink_budget = 0.0;
};

enum class GuessVerdict { Correct, Incorrect, Ignored };

struct GuessOutcome {
  GuessVerdict verdict = GuessVerdict::Ignored;
  std::string word;  ///< canonical form
  bool ledger_added = false;
  std::optional<Side> winner;  ///< set on Correct
  bool match_finished = false;
};

/// What the NN saw on one evaluation. `top_*` is the mask-renormalized
/// leader, shown on the confidence meter whether or not it was emitted.
struct NnStep {
  std::string top_word;
  double top_confidence = 0.0;
  std::optional<NnGuess> emitted;
  std::optional<GuessOutcome> outcome;  ///< set when emitted
};

struct CountdownRestarted {
  Timestamp deadline;
};

struct MatchResult {
  Side winner = Side::Humans;
  std::size_t humans_points = 0;
  std::size_t nn_points = 0;
};

/// Authoritative state of one match. Single writer: every call is a
/// synchronous transition and the object must not be shared across threads
/// without external serialization.
class Match {
 public:
  /// `categories` is the classifier's full category list; `budgets` must
  /// cover every playable word. Throws ArgumentError for fewer than two
  /// humans, duplicate or reserved ids, an invalid config, playable words
  /// outside `categories`, missing budgets, or fewer words than rounds.
  static Match start(MatchConfig config, std::vector<PlayerId> humans, InkBudgetTable budgets,
                     std::vector<std::string> categories);

  /// Deals the next round. Throws StateError outside BetweenRounds, after the
  /// last round, or with fewer than two humans connected.
  void start_round(Timestamp now);

  /// Throws StateError outside a round, AuthorizationError unless `from` is
  /// the Sketcher, ValidationError for an off-canvas or empty stroke.
  StrokeOutcome apply_stroke(PlayerId from, const Stroke& stroke);

  /// Throws StateError outside a round, AuthorizationError for an unknown
  /// player.
  GuessOutcome submit_guess(PlayerId from, std::string_view word, Timestamp now);

  /// One NN evaluation of the current drawing. Returns nullopt before the
  /// first stroke or outside a round. When `last_stroke_points` is given only
  /// that many points of the newest stroke are visible (per-point streaming).
  std::optional<NnStep> nn_step(const Classifier& classifier, Timestamp now,
                                std::optional<std::size_t> last_stroke_points = std::nullopt);

  /// Restarts the countdown when it has expired. No-op outside a round.
  std::optional<CountdownRestarted> tick(Timestamp now);

  /// Throws StateError before the match is finished.
  MatchResult result() const;

  /// Late joiners become Guessers.
  void add_player(PlayerId id);

  /// Returns true when the player was the active Sketcher and the round was
  /// aborted without scoring. The aborted word is avoided on the re-deal when
  /// another unused word exists.
  bool remove_player(PlayerId id);

  Phase phase() const noexcept { return phase_; }
  const MatchConfig& config() const noexcept { return config_; }
  const std::vector<PlayerId>& humans() const noexcept { return humans_; }
  bool has_player(PlayerId id) const;
  std::optional<Role> role_of(PlayerId id) const;
  const std::optional<RoundState>& round() const noexcept { return round_; }
  const std::vector<RoundResult>& history() const noexcept { return history_; }
  std::size_t humans_points() const noexcept { return humans_points_; }
  std::size_t nn_points() const noexcept { return nn_points_; }
  std::size_t completed_rounds() const noexcept { return history_.size(); }
  const InkBudgetTable& budgets() const noexcept { return budgets_; }
  bool is_category(std::string_view word) const;

  /// Full state, suitable for comparing replays.
  nlohmann::ordered_json snapshot() const;
  /// FNV-1a 64 of the snapshot text.
  std::uint64_t digest() const;

 private:
  Match(MatchConfig config, std::vector<PlayerId> humans, InkBudgetTable budgets,
        std::vector<std::string> categories);

  void require_phase(Phase expected, const char* op) const;
  void finish_round(Side winner, Timestamp now);

  MatchConfig config_;
  std::vector<PlayerId> humans_;
  InkBudgetTable budgets_;
  std::vector<std::string> categories_;
  Rng rng_;
  Phase phase_ = Phase::Lobby;
  std::size_t first_sketcher_ = 0;
  std::size_t rounds_dealt_ = 0;
  std::vector<std::string> used_words_;
  std::optional<std::string> aborted_word_;
  std::optional<RoundState> round_;
  std::vector<RoundResult> history_;
  std::size_t humans_points_ = 0;
  std::size_t nn_points_ = 0;
  // (revision, visible points of the newest stroke, word) of the NN's last emission.
  std::optional<std::tuple<std::uint64_t, std::size_t, std::string>> last_nn_emission_;
};

/// Free-function spellings of the match transitions.
inline Match start_match(MatchConfig config, std::vector<PlayerId> humans, InkBudgetTable budgets,
                         std::vector<std::string> categories) {
  return Match::start(std::move(config), std::move(humans), std::move(budgets),
                      std::move(categories));
}

}  // namespace innk
