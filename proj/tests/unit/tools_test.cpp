#include <sstream>

#include <gtest/gtest.h>

#include "innk/tools/match_config_file.hpp"
#include "innk/tools/simulate.hpp"
#include "scripted_match.hpp"
#include "test_support.hpp"

namespace innk {
namespace {

using sim::Strategy;

struct SimWorld {
  std::vector<LabeledDrawing> train, held_out;
  std::shared_ptr<const KnnIndex> index;
  InkBudgetTable budgets;
};

const SimWorld& sim_world() {
  static const SimWorld w = [] {
    SimWorld s;
    const auto& shapes = synth::shape_names();
    const auto all = synth::generate_corpus(shapes, 40, 11);
    for (std::size_t i = 0; i < all.size(); ++i) (i % 5 == 4 ? s.held_out : s.train).push_back(all[i]);
    Dataset ds(shapes, s.train);
    s.index = std::make_shared<const KnnIndex>(KnnIndex::build(ds, kDefaultNeighbors));
    s.budgets = compute_ink_budgets(ds);
    return s;
  }();
  return w;
}

sim::SimulationReport run(sim::SimulationOptions o) {
  const auto& w = sim_world();
  return sim::simulate(*w.index, w.budgets, w.held_out, o);
}

std::string report_text(const sim::SimulationReport& r) {
  std::ostringstream s;
  sim::write_report(r, s);
  return s.str();
}

TEST(Strategy, NamesRoundTrip) {
  for (auto s : {Strategy::Clean, Strategy::Noise, Strategy::RebusPrefix})
    EXPECT_EQ(sim::parse_strategy(sim::to_string(s)), s);
  EXPECT_THROW(sim::parse_strategy("scribble"), ArgumentError);
}

TEST(Simulate, ZeroTrialsIsEmpty) {
  sim::SimulationOptions o;
  o.trials = 0;
  const auto r = run(o);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(report_text(r), "");
  ASSERT_EQ(r.summary.size(), 1u);
  EXPECT_EQ(r.summary[0].trials, 0u);
}

TEST(Simulate, RejectsBadThreshold) {
  sim::SimulationOptions o;
  o.threshold = 1.5;
  EXPECT_THROW(run(o), ArgumentError);
}

TEST(Simulate, DeterministicAndPrefixStable) {
  sim::SimulationOptions o;
  o.strategies = {Strategy::Clean, Strategy::Noise, Strategy::RebusPrefix};
  o.trials = 12;
  o.seed = 4;
  const auto a = report_text(run(o));
  EXPECT_EQ(a, report_text(run(o)));
  o.trials = 5;
  const auto prefix = report_text(run(o));
  EXPECT_EQ(a.substr(0, prefix.size()), prefix);
  o.seed = 5;
  EXPECT_NE(report_text(run(o)), prefix);
}

TEST(Simulate, RecordInvariants) {
  sim::SimulationOptions o;
  o.strategies = {Strategy::Clean, Strategy::Noise, Strategy::RebusPrefix};
  o.trials = 60;
  const auto r = run(o);
  ASSERT_EQ(r.records.size(), 180u);
  const auto& ex = sim_world().held_out;
  for (std::size_t i = 0; i < r.records.size(); i += 3) {
    const auto& clean = r.records[i];
    const auto& noise = r.records[i + 1];
    const auto& rebus = r.records[i + 2];
    ASSERT_LT(clean.example, ex.size());
    EXPECT_EQ(clean.example, noise.example);
    EXPECT_EQ(clean.example, rebus.example);
    EXPECT_EQ(clean.category, ex[clean.example].word);
    const std::size_t n = ex[clean.example].drawing.strokes.size();

    for (const auto* rec : {&clean, &noise, &rebus}) {
      EXPECT_EQ(rec->trajectory.size(), rec->strokes);
      if (rec->correct) {
        EXPECT_LE(rec->strokes_to_correct, rec->strokes);
        EXPECT_EQ(rec->emissions.back().word, rec->category);
        EXPECT_EQ(rec->final_top, rec->category);
      } else {
        EXPECT_EQ(rec->strokes_to_correct, rec->strokes + 1);
      }
      for (const auto& e : rec->emissions) {
        EXPECT_EQ(std::count(e.ledger.begin(), e.ledger.end(), e.word), 0);
        EXPECT_GE(e.confidence, o.threshold);
      }
    }
    if (!clean.correct) {
      EXPECT_EQ(clean.strokes, n);
    }
    EXPECT_LE(rebus.strokes, std::max<std::size_t>(1, n / 2));
    EXPECT_TRUE(noise.noise_placement == "prepend" || noise.noise_placement == "interleave");
    // Noise is sized to the ink slack, so it never forces truncation on its own.
    if (!clean.ink_exhausted && noise.strokes > n) {
      EXPECT_FALSE(noise.ink_exhausted);
    }
  }
}

TEST(Simulate, NoMaskThresholdZeroTracksArgmax) {
  sim::SimulationOptions o;
  o.trials = 25;
  o.threshold = 0.0;
  o.masking = false;
  const auto& w = sim_world();
  const auto r = run(o);
  for (const auto& rec : r.records) {
    const auto& d = w.held_out[rec.example].drawing;
    ASSERT_EQ(rec.emissions.size(), rec.strokes);
    Drawing visible;
    for (std::size_t s = 0; s < rec.strokes; ++s) {
      visible.strokes.push_back(d.strokes[s]);
      const auto scores = w.index->predict(visible);
      const auto top = scores.argmax();
      EXPECT_EQ(rec.emissions[s].word, w.index->categories()[top]);
      EXPECT_DOUBLE_EQ(rec.emissions[s].confidence, scores.confidence(top));
      EXPECT_DOUBLE_EQ(rec.trajectory[s], scores.confidence(top));
    }
  }
}

TEST(Simulate, NoRoomForNoiseReplaysTheWholeDrawing) {
  const auto& w = sim_world();
  // Pick a multi-stroke drawing and leave it almost no spare ink.
  const auto it = std::find_if(w.held_out.begin(), w.held_out.end(),
                               [](const auto& ex) { return ex.drawing.strokes.size() >= 2; });
  ASSERT_NE(it, w.held_out.end());
  const std::vector<LabeledDrawing> one{*it};
  const InkBudgetTable tight(1.0, {{it->word, path_length(it->drawing) + 1.0}});
  sim::SimulationOptions o;
  o.strategies = {Strategy::Clean, Strategy::Noise};
  o.trials = 3;
  o.threshold = 1.0;  // never emits early, so every stroke is replayed unless correct at 1.0
  const auto r = sim::simulate(*w.index, tight, one, o);
  for (std::size_t i = 0; i < r.records.size(); i += 2) {
    const auto& clean = r.records[i];
    const auto& noise = r.records[i + 1];
    EXPECT_FALSE(clean.ink_exhausted);
    EXPECT_TRUE(noise.ink_exhausted);
    EXPECT_EQ(noise.strokes, clean.strokes);
    EXPECT_EQ(noise.trajectory, clean.trajectory);
  }
}

TEST(Simulate, CleanReplayOfTrainingDrawingsMostlyCorrect) {
  const auto& w = sim_world();
  sim::SimulationOptions o;
  o.trials = 200;
  o.seed = 21;
  const auto r = sim::simulate(*w.index, w.budgets, w.train, o);
  std::size_t correct = 0;
  for (const auto& rec : r.records) correct += rec.correct;
  // Measured 200/200 on this fixture; the floor leaves room for harmless drift.
  EXPECT_GE(correct, 190u);
}

TEST(Simulate, MedianOracle) {
  std::vector<sim::TrialRecord> recs(5);
  const std::size_t v[] = {4, 1, 9, 2, 7};
  for (std::size_t i = 0; i < 5; ++i) recs[i].strokes_to_correct = v[i];
  EXPECT_DOUBLE_EQ(sim::median_strokes(recs, Strategy::Clean), 4.0);
  recs.pop_back();
  EXPECT_DOUBLE_EQ(sim::median_strokes(recs, Strategy::Clean), 3.0);
  EXPECT_DOUBLE_EQ(sim::median_strokes(recs, Strategy::Noise), 0.0);
}

TEST(Simulate, SummaryCountsMatchRecords) {
  sim::SimulationOptions o;
  o.strategies = {Strategy::Noise, Strategy::Clean};
  o.trials = 30;
  const auto r = run(o);
  ASSERT_EQ(r.summary.size(), 2u);
  EXPECT_EQ(r.summary[0].strategy, Strategy::Noise);
  for (const auto& s : r.summary) {
    EXPECT_EQ(s.trials, 30u);
    const auto correct = std::count_if(r.records.begin(), r.records.end(), [&](const auto& x) {
      return x.strategy == s.strategy && x.correct;
    });
    EXPECT_EQ(s.correct, static_cast<std::size_t>(correct));
  }
  std::ostringstream out;
  sim::write_summary(r, out);
  EXPECT_NE(out.str().find("noise"), std::string::npos);
}

// --- config files -------------------------------------------------------------

TEST(ConfigFile, AppliesSettings) {
  std::istringstream in(
      "# tournament settings\n"
      "rounds = 7\n"
      "round_seconds = 45.5\n"
      "threshold=0.65   # stricter\n"
      "ink_multiplier = 2\n"
      "words = Cat, hot  dog ,,circle\n"
      "seed = 42\n"
      "intermission_seconds = 0\n"
      "nn_schedule = per_point\n"
      "max_players = 4\n"
      "max_rooms = 10\n");
  const auto cfg = tools::parse_config(in, "t.conf");
  EXPECT_EQ(cfg.room.match.rounds_to_play, 7u);
  EXPECT_EQ(cfg.room.match.round_duration, Millis{45'500});
  EXPECT_DOUBLE_EQ(cfg.room.match.confidence_threshold, 0.65);
  EXPECT_DOUBLE_EQ(cfg.room.match.ink_multiplier, 2.0);
  EXPECT_EQ(cfg.room.match.category_words, (std::vector<std::string>{"cat", "hot dog", "circle"}));
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.room.match.rng_seed, 42u);
  EXPECT_EQ(cfg.room.intermission, Millis{0});
  EXPECT_EQ(cfg.room.nn_schedule, server::NnSchedule::PerPoint);
  EXPECT_EQ(cfg.room.max_players, 4u);
  EXPECT_EQ(cfg.max_rooms, 10u);
}

TEST(ConfigFile, EmptyKeepsDefaults) {
  std::istringstream in("\n# nothing\n");
  const auto cfg = tools::parse_config(in, "t.conf");
  EXPECT_EQ(cfg.room.match.rounds_to_play, 5u);
  EXPECT_EQ(cfg.room.match.round_duration, Millis{30'000});
}

TEST(ConfigFile, ErrorsNameTheLine) {
  const std::vector<std::pair<std::string, std::string>> bad{
      {"rounds = 5\ncolour = red\n", "t.conf:2: unknown key 'colour'"},
      {"rounds = five\n", "t.conf:1: bad number 'five'"},
      {"just words\n", "t.conf:1: expected key = value"},
      {"round_seconds = -3\n", "t.conf:1: duration must be positive"},
      {"nn_schedule = sometimes\n", "t.conf:1: nn_schedule must be per_stroke or per_point"},
  };
  for (const auto& [text, msg] : bad) {
    std::istringstream in(text);
    try {
      tools::parse_config(in, "t.conf");
      ADD_FAILURE() << text;
    } catch (const ArgumentError& e) {
      EXPECT_EQ(std::string(e.what()), msg);
    }
  }
}

TEST(ConfigFile, ValidatesResult) {
  std::istringstream even("rounds = 4\n");
  EXPECT_THROW(tools::parse_config(even, "t.conf"), ArgumentError);
  std::istringstream thr("threshold = 1.2\n");
  EXPECT_THROW(tools::parse_config(thr, "t.conf"), ArgumentError);
}

TEST(ConfigFile, LoadsFromDisk) {
  testing::TempDir dir;
  const auto p = dir.write("m.conf", "rounds = 3\n");
  EXPECT_EQ(tools::load_config(p).room.match.rounds_to_play, 3u);
  EXPECT_THROW(tools::load_config(dir.path() / "absent.conf"), Error);
}

}  // namespace
}  // namespace innk
