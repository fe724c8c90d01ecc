#include "innk/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "innk/errors.hpp"
#include "innk/words.hpp"

namespace innk {

const char* to_string(Side side) { return side == Side::Humans ? "humans" : "nn"; }

const char* to_string(Role role) { return role == Role::Sketcher ? "sketcher" : "guesser"; }

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Lobby: return "lobby";
    case Phase::InRound: return "in_round";
    case Phase::BetweenRounds: return "between_rounds";
    case Phase::Finished: return "finished";
  }
  return "unknown";
}

void MatchConfig::validate() const {
  if (rounds_to_play == 0 || rounds_to_play % 2 == 0) {
    throw ArgumentError("rounds_to_play must be odd and at least 1");
  }
  if (round_duration <= Millis::zero()) throw ArgumentError("round duration must be positive");
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw ArgumentError("confidence threshold must be in [0, 1]");
  }
  if (!(ink_multiplier > 0.0) || !std::isfinite(ink_multiplier)) {
    throw ArgumentError("ink multiplier must be positive and finite");
  }
}

Match::Match(MatchConfig config, std::vector<PlayerId> humans, InkBudgetTable budgets,
             std::vector<std::string> categories)
    : config_(std::move(config)),
      humans_(std::move(humans)),
      budgets_(std::move(budgets)),
      categories_(std::move(categories)),
      rng_(config_.rng_seed) {}

Match Match::start(MatchConfig config, std::vector<PlayerId> humans, InkBudgetTable budgets,
                   std::vector<std::string> categories) {
  config.validate();
  if (humans.size() < 2) throw ArgumentError("a match needs at least two human players");
  for (std::size_t i = 0; i < humans.size(); ++i) {
    if (humans[i] == kNnPlayer) throw ArgumentError("player id 0 is reserved for the NN");
    for (std::size_t j = 0; j < i; ++j) {
      if (humans[i] == humans[j]) throw ArgumentError("duplicate player id");
    }
  }
  for (auto& c : categories) c = canonical_word(c);
  if (config.category_words.empty()) config.category_words = categories;
  for (auto& w : config.category_words) {
    w = canonical_word(w);
    if (std::find(categories.begin(), categories.end(), w) == categories.end()) {
      throw ArgumentError("code word '" + w + "' is not a classifier category");
    }
    if (!budgets.contains(w)) throw ArgumentError("no ink budget for code word '" + w + "'");
  }
  std::sort(config.category_words.begin(), config.category_words.end());
  config.category_words.erase(
      std::unique(config.category_words.begin(), config.category_words.end()),
      config.category_words.end());
  if (config.category_words.size() < config.rounds_to_play) {
    throw ArgumentError("need at least one distinct code word per round");
  }

  Match m(std::move(config), std::move(humans), std::move(budgets), std::move(categories));
  m.first_sketcher_ = m.rng_.below(m.humans_.size());
  m.phase_ = Phase::BetweenRounds;
  return m;
}

void Match::require_phase(Phase expected, const char* op) const {
  if (phase_ != expected) {
    throw StateError(std::string(op) + " is not allowed in phase " + to_string(phase_));
  }
}

bool Match::has_player(PlayerId id) const {
  return std::find(humans_.begin(), humans_.end(), id) != humans_.end();
}

std::optional<Role> Match::role_of(PlayerId id) const {
  if (id == kNnPlayer) return Role::Guesser;
  if (!has_player(id)) return std::nullopt;
  if (round_ && round_->sketcher == id) return Role::Sketcher;
  return Role::Guesser;
}

bool Match::is_category(std::string_view word) const {
  return std::find(categories_.begin(), categories_.end(), word) != categories_.end();
}

void Match::start_round(Timestamp now) {
  require_phase(Phase::BetweenRounds, "start_round");
  if (history_.size() >= config_.rounds_to_play) throw StateError("all rounds have been played");
  if (humans_.size() < 2) throw StateError("need at least two human players to deal a round");

  std::vector<std::string> pool;
  for (const auto& w : config_.category_words) {
    if (std::find(used_words_.begin(), used_words_.end(), w) == used_words_.end()) {
      pool.push_back(w);
    }
  }
  if (aborted_word_ && pool.size() > 1) std::erase(pool, *aborted_word_);
  aborted_word_.reset();

  RoundState r;
  r.round_number = history_.size() + 1;
  r.code_word = pool[rng_.below(pool.size())];
  r.sketcher = humans_[(first_sketcher_ + rounds_dealt_) % humans_.size()];
  r.ink_budget = budgets_.budget(r.code_word);
  r.deadline = now + config_.round_duration;
  ++rounds_dealt_;

  round_ = std::move(r);
  last_nn_emission_.reset();
  phase_ = Phase::InRound;
}

StrokeOutcome Match::apply_stroke(PlayerId from, const Stroke& stroke) {
  require_phase(Phase::InRound, "apply_stroke");
  RoundState& r = *round_;
  if (from != r.sketcher) throw AuthorizationError("only the Sketcher may draw");
  validate(stroke, r.drawing.canvas);

  StrokeOutcome out;
  out.ink_budget = r.ink_budget;
  if (r.ink_used >= r.ink_budget) {
    out.ink_used = r.ink_used;
    return out;
  }

  const double length = stroke_length(stroke.points);
  if (r.ink_used + length <= r.ink_budget) {
    out.stroke = stroke;
    r.ink_used += length;
  } else {
    out.stroke = truncate_stroke(stroke, r.ink_budget - r.ink_used);
    out.truncated = true;
    r.ink_used = r.ink_budget;
    if (out.stroke.points.size() < 2) {
      out.stroke = {};
      out.ink_used = r.ink_used;
      return out;
    }
  }
  out.accepted = true;
  r.drawing.strokes.push_back(out.stroke);
  ++r.revision;
  out.ink_used = r.ink_used;
  return out;
}

GuessOutcome Match::submit_guess(PlayerId from, std::string_view word, Timestamp now) {
  require_phase(Phase::InRound, "submit_guess");
  if (from != kNnPlayer && !has_player(from)) throw AuthorizationError("unknown player");

  RoundState& r = *round_;
  GuessOutcome out;
  out.word = canonical_word(word);
  if (from == r.sketcher) return out;

  if (out.word == r.code_word) {
    out.verdict = GuessVerdict::Correct;
    out.winner = from == kNnPlayer ? Side::NN : Side::Humans;
    finish_round(*out.winner, now);
    out.match_finished = phase_ == Phase::Finished;
    return out;
  }

  out.verdict = GuessVerdict::Incorrect;
  if (is_category(out.word)) out.ledger_added = r.ledger.add(out.word);
  return out;
}

void Match::finish_round(Side winner, Timestamp now) {
  RoundState& r = *round_;
  r.winner = winner;
  (winner == Side::Humans ? humans_points_ : nn_points_) += 1;
  used_words_.push_back(r.code_word);
  history_.push_back({r.round_number, winner, r.code_word, now});
  phase_ = history_.size() >= config_.rounds_to_play ? Phase::Finished : Phase::BetweenRounds;
}

std::optional<NnStep> Match::nn_step(const Classifier& classifier, Timestamp now,
                                     std::optional<std::size_t> last_stroke_points) {
  if (phase_ != Phase::InRound) return std::nullopt;
  const RoundState& r = *round_;
  if (r.drawing.empty()) return std::nullopt;

  std::size_t visible = r.drawing.strokes.back().points.size();
  std::optional<Drawing> partial;
  if (last_stroke_points && *last_stroke_points < visible) {
    visible = std::max<std::size_t>(*last_stroke_points, 1);
    partial = r.drawing;
    partial->strokes.back().points.resize(visible);
  }

  const ScoreDistribution dist = classifier.predict(partial ? *partial : r.drawing);
  MaskedScores masked = mask_scores(dist, r.ledger);

  NnStep step;
  step.top_word = masked.top_word;
  step.top_confidence = masked.top_confidence;
  if (masked.top_confidence < config_.confidence_threshold) return step;

  const auto key = std::make_tuple(r.revision, visible, masked.top_word);
  if (last_nn_emission_ == key) return step;
  last_nn_emission_ = key;

  step.emitted = NnGuess{masked.top_word, masked.top_confidence};
  step.outcome = submit_guess(kNnPlayer, masked.top_word, now);
  return step;
}

std::optional<CountdownRestarted> Match::tick(Timestamp now) {
  if (phase_ != Phase::InRound) return std::nullopt;
  RoundState& r = *round_;
  if (now < r.deadline || r.winner) return std::nullopt;
  r.deadline = now + config_.round_duration;
  return CountdownRestarted{r.deadline};
}

MatchResult Match::result() const {
  require_phase(Phase::Finished, "match_result");
  MatchResult res;
  res.humans_points = humans_points_;
  res.nn_points = nn_points_;
  res.winner = humans_points_ > nn_points_ ? Side::Humans : Side::NN;
  return res;
}

void Match::add_player(PlayerId id) {
  if (id == kNnPlayer) throw ArgumentError("player id 0 is reserved for the NN");
  if (has_player(id)) throw ArgumentError("player already in match");
  humans_.push_back(id);
}

bool Match::remove_player(PlayerId id) {
  auto it = std::find(humans_.begin(), humans_.end(), id);
  if (it == humans_.end()) return false;
  humans_.erase(it);
  if (phase_ != Phase::InRound || round_->sketcher != id) return false;

  aborted_word_ = round_->code_word;
  round_.reset();
  last_nn_emission_.reset();
  phase_ = Phase::BetweenRounds;
  return true;
}

namespace {

nlohmann::ordered_json drawing_json(const Drawing& d) {
  auto strokes = nlohmann::ordered_json::array();
  for (const auto& s : d.strokes) {
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : s.points) pts.push_back({p.x, p.y});
    strokes.push_back(std::move(pts));
  }
  return strokes;
}

}  // namespace

nlohmann::ordered_json Match::snapshot() const {
  nlohmann::ordered_json j;
  j["phase"] = to_string(phase_);
  j["rounds_to_play"] = config_.rounds_to_play;
  j["round_ms"] = config_.round_duration.count();
  j["threshold"] = config_.confidence_threshold;
  j["words"] = config_.category_words;
  auto players = nlohmann::ordered_json::array();
  for (auto id : humans_) players.push_back(id.value);
  j["humans"] = std::move(players);
  j["humans_points"] = humans_points_;
  j["nn_points"] = nn_points_;
  j["first_sketcher"] = first_sketcher_;
  j["rounds_dealt"] = rounds_dealt_;
  j["used_words"] = used_words_;
  auto hist = nlohmann::ordered_json::array();
  for (const auto& h : history_) {
    hist.push_back({{"round", h.round_number},
                    {"winner", to_string(h.winner)},
                    {"word", h.code_word},
                    {"ended_at", to_ms(h.ended_at)}});
  }
  j["history"] = std::move(hist);
  if (round_) {
    const RoundState& r = *round_;
    nlohmann::ordered_json rj;
    rj["round"] = r.round_number;
    rj["code_word"] = r.code_word;
    rj["sketcher"] = r.sketcher.value;
    rj["ink_used"] = r.ink_used;
    rj["ink_budget"] = r.ink_budget;
    rj["ledger"] = r.ledger.words();
    rj["deadline"] = to_ms(r.deadline);
    rj["winner"] = r.winner ? nlohmann::ordered_json(to_string(*r.winner)) : nullptr;
    rj["revision"] = r.revision;
    rj["drawing"] = drawing_json(r.drawing);
    j["round"] = std::move(rj);
  } else {
    j["round"] = nullptr;
  }
  std::ostringstream engine;
  engine << rng_.engine();
  j["rng"] = engine.str();
  return j;
}

std::uint64_t Match::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : snapshot().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace innk
