#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "innk/classifier.hpp"
#include "innk/rng.hpp"
#include "innk/server/registry.hpp"
#include "innk/tools/synth.hpp"

namespace innk::testing {

/// Shared fixture: a small synthetic index and its ink budgets.
struct ShapeWorld {
  std::shared_ptr<const KnnIndex> index;
  InkBudgetTable budgets;
};

inline ShapeWorld make_shape_world(std::size_t per_category = 30, std::uint64_t seed = 2024) {
  Dataset ds(synth::shape_names(), synth::generate_corpus(synth::shape_names(), per_category, seed));
  return {std::make_shared<const KnnIndex>(KnnIndex::build(ds, kDefaultNeighbors)),
          compute_ink_budgets(ds, kDefaultInkMultiplier)};
}

/// Records every frame in and out of a registry as "<session> <frame>" lines
/// ("> " prefixed for inbound).
class TraceRecorder {
 public:
  explicit TraceRecorder(server::RoomRegistry& registry) : registry_(registry) {}

  std::vector<server::Outbound> send(server::SessionId s, const std::string& frame, Timestamp now) {
    log_.push_back("> " + std::to_string(s) + " " + frame);
    return record(registry_.handle_message(s, frame, now));
  }
  std::vector<server::Outbound> timers(Timestamp now) {
    log_.push_back("> timers " + std::to_string(to_ms(now)));
    return record(registry_.run_timers(now));
  }
  std::vector<server::Outbound> drop(server::SessionId s, Timestamp now) {
    log_.push_back("> disconnect " + std::to_string(s));
    return record(registry_.disconnect(s, now));
  }

  const std::vector<std::string>& log() const { return log_; }
  const std::vector<server::Outbound>& delivered() const { return delivered_; }

  std::string text() const {
    std::string t;
    for (const auto& l : log_) t += l + "\n";
    return t;
  }

 private:
  std::vector<server::Outbound> record(std::vector<server::Outbound> out) {
    for (const auto& o : out) {
      log_.push_back(std::to_string(o.to) + " " + o.frame);
      delivered_.push_back(o);
    }
    return out;
  }

  server::RoomRegistry& registry_;
  std::vector<std::string> log_;
  std::vector<server::Outbound> delivered_;
};

inline std::string frame_type(const std::string& frame) {
  return nlohmann::json::parse(frame).at("type").get<std::string>();
}

/// Code-word secrecy: for every session, no frame before the round's
/// round_end may mention the code word unless that session is the round's
/// Sketcher. Returns a description of the first violation, or "".
inline std::string find_secrecy_violation(const std::vector<server::Outbound>& trace) {
  // Track per round: the code word (learned from code_word frames) and who got it.
  std::string word;
  server::SessionId sketcher = 0;
  bool open = false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& o = trace[i];
    const auto type = frame_type(o.frame);
    if (type == "code_word") {
      word = nlohmann::json::parse(o.frame).at("word").get<std::string>();
      sketcher = o.to;
      open = true;
      continue;
    }
    if (type == "round_end" || type == "round_aborted") {
      open = false;
      continue;
    }
    if (!open || o.to == sketcher) continue;
    const auto quoted = "\"" + word + "\"";
    if (o.frame.find(quoted) != std::string::npos) {
      return "frame " + std::to_string(i) + " to session " + std::to_string(o.to) +
             " leaks '" + word + "': " + o.frame;
    }
  }
  return {};
}

/// A deterministic two-human match driven entirely through the registry.
/// The Sketcher draws a synthetic rendition of the code word one stroke at a
/// time; the Guesser mixes wrong and right guesses; one round is left to run
/// past its deadline. Returns the recorder after match_end.
inline std::string play_scripted_match(TraceRecorder& rec,
                                Millis intermission = Millis{5'000}) {
  std::int64_t t = 1'700'000'000'000;
  const server::SessionId alice = 11, bob = 22;

  auto created = rec.send(alice, R"({"type":"create_room"})", at_ms(t));
  const auto room = nlohmann::json::parse(created.at(0).frame).at("room").get<std::string>();
  rec.send(alice, R"({"type":"join","room":")" + room + R"(","name":"alice"})", at_ms(t += 10));
  rec.send(bob, R"({"type":"join","room":")" + room + R"(","name":"bob"})", at_ms(t += 10));
  auto dealt = rec.send(alice, R"({"type":"start_match"})", at_ms(t += 10));

  Rng pen(5);
  bool finished = false;
  for (int round = 1; !finished; ++round) {
    std::string word;
    server::SessionId sketcher = 0;
    for (const auto& o : dealt) {
      if (frame_type(o.frame) == "code_word") {
        word = nlohmann::json::parse(o.frame).at("word").get<std::string>();
        sketcher = o.to;
      }
    }
    if (word.empty()) return "round " + std::to_string(round) + " was never dealt";
    const server::SessionId guesser = sketcher == alice ? bob : alice;

    auto round_over = [&](const std::vector<server::Outbound>& out) {
      bool ended = false;
      for (const auto& o : out) {
        const auto type = frame_type(o.frame);
        if (type == "match_end") finished = true;
        if (type == "round_end") ended = true;
      }
      return ended;
    };

    const auto drawing = synth::draw_shape(word, pen).drawing;
    bool over = false;
    for (std::size_t s = 0; s < drawing.strokes.size() && !over; ++s) {
      auto pts = nlohmann::json::array();
      for (const auto& p : drawing.strokes[s].points) pts.push_back({p.x, p.y});
      nlohmann::json msg = {{"type", "stroke"}, {"points", pts}};
      over = round_over(rec.send(sketcher, msg.dump(), at_ms(t += 700)));
      if (over) break;

      if (round == 1 && s == 0) {
        // Let the countdown lapse once.
        over = round_over(rec.timers(at_ms(t += 31'000)));
      }
      if (!over && s == 0) {
        const std::string wrong = round % 2 ? "zebra" : (word == "line" ? "circle" : "line");
        over = round_over(rec.send(guesser, R"({"type":"guess","word":")" + wrong + R"("})",
                                   at_ms(t += 300)));
      }
    }
    if (!over) {
      over = round_over(rec.send(guesser, R"({"type":"guess","word":"  )" + word + R"( "})",
                                 at_ms(t += 400)));
    }
    if (!over) return "round " + std::to_string(round) + " did not end";
    if (finished) break;
    rec.timers(at_ms(t += 1'000));  // still in intermission
    dealt = rec.timers(at_ms(t += intermission.count()));
  }
  return {};
}

}  // namespace innk::testing
