#include "innk/server/room.hpp"

#include <algorithm>

namespace innk::server {

namespace {

Outbound to(SessionId session, std::string frame) { return {session, std::move(frame)}; }

}  // namespace

Room::Room(std::string code, std::shared_ptr<const Classifier> classifier,
           std::shared_ptr<const InkBudgetTable> budgets, RoomConfig config)
    : code_(std::move(code)),
      classifier_(std::move(classifier)),
      budgets_(std::move(budgets)),
      config_(std::move(config)) {}

Phase Room::phase() const noexcept { return match_ ? match_->phase() : Phase::Lobby; }

bool Room::contains(SessionId session) const { return member(session) != nullptr; }

const Room::Member* Room::member(SessionId session) const {
  for (const auto& m : members_)
    if (m.session == session) return &m;
  return nullptr;
}

std::optional<PlayerId> Room::player_of(SessionId session) const {
  if (const auto* m = member(session)) return m->id;
  return std::nullopt;
}

std::vector<RosterEntry> Room::roster() const {
  std::vector<RosterEntry> r;
  for (const auto& m : members_) r.push_back({m.id, m.name});
  return r;
}

void Room::broadcast(std::vector<Outbound>& out, const std::string& frame) const {
  for (const auto& m : members_) out.push_back(to(m.session, frame));
}

Score Room::score() const {
  return match_ ? Score{match_->humans_points(), match_->nn_points()} : Score{};
}

std::vector<Outbound> Room::join(SessionId session, std::string name, Timestamp /*now*/) {
  std::vector<Outbound> out;
  if (contains(session)) {
    out.push_back(to(session, encode::error("already_in_room", "already joined this room")));
    return out;
  }
  if (members_.size() >= config_.max_players) {
    out.push_back(to(session, encode::error("room_full", "room is full")));
    return out;
  }

  const PlayerId id{next_player_++};
  members_.push_back({session, id, std::move(name)});
  if (match_ && match_->phase() != Phase::Finished) match_->add_player(id);

  broadcast(out, encode::joined(id, roster()));
  if (phase() == Phase::InRound) catch_up(out, session);
  return out;
}

void Room::catch_up(std::vector<Outbound>& out, SessionId session) {
  const RoundState& r = *match_->round();
  out.push_back(to(session, encode::role(Role::Guesser)));
  out.push_back(to(session, encode::round_start(r.round_number, r.deadline, r.ink_budget,
                                                match_->config().confidence_threshold)));
  for (const auto& s : r.drawing.strokes) out.push_back(to(session, encode::stroke(s, false)));
  out.push_back(to(session, encode::ink_update(r.ink_used, r.ink_budget)));
}

std::vector<Outbound> Room::start_match(SessionId session, Timestamp now) {
  std::vector<Outbound> out;
  if (!contains(session)) {
    out.push_back(to(session, encode::error("not_in_room", "join a room first")));
    return out;
  }
  if (members_.front().session != session) {
    out.push_back(to(session, encode::error("not_host", "only the host can start the match")));
    return out;
  }
  if (phase() != Phase::Lobby && phase() != Phase::Finished) {
    out.push_back(to(session, encode::error("wrong_phase", "a match is already running")));
    return out;
  }
  if (members_.size() < 2) {
    out.push_back(to(session, encode::error("not_enough_players", "need at least two players")));
    return out;
  }

  MatchConfig cfg = config_.match;
  cfg.rng_seed += matches_started_++;
  std::vector<PlayerId> humans;
  for (const auto& m : members_) humans.push_back(m.id);
  try {
    match_.emplace(Match::start(cfg, humans, *budgets_, classifier_->categories()));
  } catch (const Error& e) {
    out.push_back(to(session, encode::error("bad_config", e.what())));
    return out;
  }
  deal_round(out, now);
  return out;
}

void Room::deal_round(std::vector<Outbound>& out, Timestamp now) {
  match_->start_round(now);
  announce_round(out);
}

void Room::announce_round(std::vector<Outbound>& out) {
  const RoundState& r = *match_->round();
  for (const auto& m : members_) {
    out.push_back(to(m.session, encode::role(m.id == r.sketcher ? Role::Sketcher : Role::Guesser)));
  }
  broadcast(out, encode::round_start(r.round_number, r.deadline, r.ink_budget,
                                     match_->config().confidence_threshold));
  for (const auto& m : members_) {
    if (m.id == r.sketcher) out.push_back(to(m.session, encode::code_word(r.code_word)));
  }
}

std::vector<Outbound> Room::stroke(SessionId session, const Stroke& s, Timestamp now) {
  std::vector<Outbound> out;
  const Member* sender = member(session);
  if (!sender) {
    out.push_back(to(session, encode::error("not_in_room", "join a room first")));
    return out;
  }
  if (phase() != Phase::InRound) {
    out.push_back(to(session, encode::error("wrong_phase", "no round in progress")));
    return out;
  }

  StrokeOutcome result;
  try {
    result = match_->apply_stroke(sender->id, s);
  } catch (const AuthorizationError& e) {
    out.push_back(to(session, encode::error("not_sketcher", e.what())));
    return out;
  } catch (const ValidationError& e) {
    out.push_back(to(session, encode::error("invalid_stroke", e.what())));
    return out;
  }
  if (!result.accepted) {
    out.push_back(to(session, encode::error("ink_exhausted", "no ink left this round")));
    return out;
  }

  broadcast(out, encode::stroke(result.stroke, result.truncated));
  broadcast(out, encode::ink_update(result.ink_used, result.ink_budget));
  if (config_.nn_schedule == NnSchedule::PerPoint) {
    for (std::size_t n = 1; n <= result.stroke.points.size() && phase() == Phase::InRound; ++n) {
      run_nn(out, now, n);
    }
  } else {
    run_nn(out, now, std::nullopt);
  }
  return out;
}

void Room::run_nn(std::vector<Outbound>& out, Timestamp now, std::optional<std::size_t> visible) {
  const auto step = match_->nn_step(*classifier_, now, visible);
  if (!step) return;
  const std::optional<std::string> shown =
      step->emitted ? std::optional<std::string>(step->emitted->word) : std::nullopt;
  const std::string confidence = encode::nn_confidence(shown, step->top_confidence);
  if (step->outcome && step->outcome->verdict == GuessVerdict::Correct) {
    // The round_end reveal goes out before anything naming the code word.
    const RoundResult& res = match_->history().back();
    broadcast(out, encode::round_end(res.round_number, res.winner, res.code_word, score()));
    broadcast(out, confidence);
    broadcast(out, encode::guess_result(kNnPlayer, step->outcome->word, true));
    if (match_->phase() == Phase::Finished) {
      broadcast(out, encode::match_end(match_->result().winner, score()));
    }
    next_round_at_ = now + config_.intermission;
    return;
  }
  broadcast(out, confidence);
  if (step->outcome) report_guess(out, kNnPlayer, *step->outcome, now);
}

void Room::report_guess(std::vector<Outbound>& out, PlayerId by, const GuessOutcome& outcome,
                        Timestamp now) {
  if (outcome.verdict == GuessVerdict::Correct) {
    const RoundResult& res = match_->history().back();
    broadcast(out, encode::round_end(res.round_number, res.winner, res.code_word, score()));
    broadcast(out, encode::guess_result(by, outcome.word, true));
    if (match_->phase() == Phase::Finished) {
      broadcast(out, encode::match_end(match_->result().winner, score()));
    }
    next_round_at_ = now + config_.intermission;
    return;
  }
  broadcast(out, encode::guess_result(by, outcome.word, false));
}

std::vector<Outbound> Room::guess(SessionId session, std::string_view word, Timestamp now) {
  std::vector<Outbound> out;
  const Member* sender = member(session);
  if (!sender) {
    out.push_back(to(session, encode::error("not_in_room", "join a room first")));
    return out;
  }
  if (phase() != Phase::InRound) {
    out.push_back(to(session, encode::error("wrong_phase", "no round in progress")));
    return out;
  }
  const auto outcome = match_->submit_guess(sender->id, word, now);
  if (outcome.verdict == GuessVerdict::Ignored) {
    out.push_back(to(session, encode::error("not_guesser", "the Sketcher cannot guess")));
    return out;
  }
  report_guess(out, sender->id, outcome, now);
  // A new wrong category sharpens the NN's mask; let it react right away.
  if (outcome.ledger_added && phase() == Phase::InRound) run_nn(out, now, std::nullopt);
  return out;
}

std::vector<Outbound> Room::run_timers(Timestamp now) {
  std::vector<Outbound> out;
  if (!match_) return out;
  if (match_->phase() == Phase::InRound) {
    if (const auto ev = match_->tick(now)) broadcast(out, encode::countdown_restarted(ev->deadline));
  } else if (match_->phase() == Phase::BetweenRounds && now >= next_round_at_ &&
             match_->humans().size() >= 2) {
    deal_round(out, now);
  }
  return out;
}

std::vector<Outbound> Room::disconnect(SessionId session, Timestamp now) {
  std::vector<Outbound> out;
  auto it = std::find_if(members_.begin(), members_.end(),
                         [&](const Member& m) { return m.session == session; });
  if (it == members_.end()) return out;
  const PlayerId id = it->id;
  const std::size_t round = match_ && match_->round() ? match_->round()->round_number : 0;
  members_.erase(it);

  bool aborted = false;
  if (match_ && match_->phase() != Phase::Finished) aborted = match_->remove_player(id);
  broadcast(out, encode::left(id, roster()));
  if (aborted) {
    broadcast(out, encode::round_aborted(round));
    next_round_at_ = now;
    if (match_->humans().size() >= 2) deal_round(out, now);
  }
  return out;
}

}  // namespace innk::server
