#include "innk/tools/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "innk/errors.hpp"
#include "innk/rng.hpp"
#include "innk/stroke.hpp"

namespace innk::sim {

namespace {

constexpr double kMinNoiseLength = 12.0;

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  // splitmix64 step so neighbouring trials get unrelated streams
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Parallel diagonal hatching over a random patch, alternating direction,
/// stopping before the total would exceed `slack`.
std::vector<Stroke> crosshatch(Rng& rng, double slack, std::size_t max_strokes) {
  std::vector<Stroke> out;
  const double size = rng.uniform(30.0, 90.0);
  const double cx = rng.uniform(size / 2, kCanvasSize - 1 - size / 2);
  const double cy = rng.uniform(size / 2, kCanvasSize - 1 - size / 2);
  const double spacing = size / 4;
  double used = 0.0;
  for (std::size_t i = 0; i < max_strokes; ++i) {
    const double offset = spacing * (static_cast<double>(i / 2 % 4) + 0.5) - size / 2;
    const double dir = i % 2 ? -1.0 : 1.0;
    Stroke s;
    s.points = {{cx - size / 2, cy + offset - dir * size / 2},
                {cx + size / 2, cy + offset + dir * size / 2}};
    for (auto& p : s.points) {
      p.x = std::clamp(p.x, 0.0, static_cast<double>(kCanvasSize - 1));
      p.y = std::clamp(p.y, 0.0, static_cast<double>(kCanvasSize - 1));
    }
    const double len = stroke_length(s.points);
    if (len < kMinNoiseLength) continue;
    if (used + len > slack) break;
    used += len;
    out.push_back(std::move(s));
  }
  return out;
}

struct Sequence {
  std::vector<Stroke> strokes;
  std::string placement;
  bool ink_exhausted = false;
};

Sequence build_sequence(const Drawing& d, Strategy strategy, double budget, Rng& rng,
                        std::size_t max_noise) {
  Sequence seq;
  switch (strategy) {
    case Strategy::Clean:
      seq.strokes = d.strokes;
      break;
    case Strategy::RebusPrefix:
      seq.strokes.assign(d.strokes.begin(),
                         d.strokes.begin() + std::max<std::size_t>(1, d.strokes.size() / 2));
      break;
    case Strategy::Noise: {
      const double slack = budget - path_length(d);
      const auto noise = crosshatch(rng, slack, max_noise);
      const bool prepend = rng.below(2) == 0;
      seq.placement = prepend ? "prepend" : "interleave";
      if (noise.empty()) seq.ink_exhausted = true;
      if (prepend) {
        seq.strokes = noise;
        seq.strokes.insert(seq.strokes.end(), d.strokes.begin(), d.strokes.end());
      } else {
        std::size_t n = 0;
        for (const auto& s : d.strokes) {
          if (n < noise.size()) seq.strokes.push_back(noise[n++]);
          seq.strokes.push_back(s);
        }
        seq.strokes.insert(seq.strokes.end(), noise.begin() + static_cast<std::ptrdiff_t>(n),
                           noise.end());
      }
      break;
    }
  }
  return seq;
}

TrialRecord run_trial(const Classifier& classifier, const Sequence& seq, const std::string& truth,
                      double budget, const SimulationOptions& options) {
  TrialRecord rec;
  rec.ink_exhausted = seq.ink_exhausted;
  GuessLedger ledger;
  Drawing visible;
  double ink = 0.0;
  bool out_of_ink = false;
  for (const auto& s : seq.strokes) {
    const double left = budget - ink;
    if (left <= 0.0) {
      out_of_ink = true;
      break;
    }
    Stroke placed = s;
    if (stroke_length(s.points) > left) {
      placed = truncate_stroke(s, left);
      out_of_ink = true;
    }
    ink += stroke_length(placed.points);
    visible.strokes.push_back(std::move(placed));
    const std::size_t n = visible.strokes.size();

    const auto scores = classifier.predict(visible);
    std::optional<NnGuess> guess;
    if (options.masking) {
      const auto masked = mask_scores(scores, ledger);
      rec.trajectory.push_back(masked.top_confidence);
      rec.final_top = masked.top_word;
      guess = masked_guess(scores, ledger, options.threshold);
    } else {
      const auto top = scores.argmax();
      const double c = scores.confidence(top);
      rec.trajectory.push_back(c);
      rec.final_top = classifier.categories()[top];
      if (c >= options.threshold) guess = NnGuess{rec.final_top, c};
    }
    if (guess) {
      rec.emissions.push_back({n, guess->word, guess->confidence, ledger.words()});
      if (guess->word == truth) {
        rec.correct = true;
        rec.strokes_to_correct = n;
        break;
      }
      ledger.add(guess->word);
    }
    if (out_of_ink) break;
  }
  rec.ink_exhausted = rec.ink_exhausted || out_of_ink;
  rec.strokes = visible.strokes.size();
  if (!rec.correct) rec.strokes_to_correct = rec.strokes + 1;
  return rec;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Clean: return "clean";
    case Strategy::Noise: return "noise";
    case Strategy::RebusPrefix: return "rebus-prefix";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::Clean, Strategy::Noise, Strategy::RebusPrefix})
    if (to_string(s) == name) return s;
  throw ArgumentError("unknown strategy '" + std::string(name) +
                      "' (expected clean, noise or rebus-prefix)");
}

SimulationReport simulate(const Classifier& classifier, const InkBudgetTable& budgets,
                          std::span<const LabeledDrawing> examples,
                          const SimulationOptions& options) {
  if (options.threshold < 0.0 || options.threshold > 1.0) {
    throw ArgumentError("threshold must be within [0, 1]");
  }
  if (options.strategies.empty()) throw ArgumentError("no strategies requested");
  SimulationReport report;
  if (options.trials > 0 && examples.empty()) throw ArgumentError("no examples to replay");

  for (std::size_t t = 0; t < options.trials; ++t) {
    Rng rng(trial_seed(options.seed, t));
    const std::size_t idx = rng.below(examples.size());
    const auto& ex = examples[idx];
    const double budget = budgets.budget(ex.word);
    for (const auto strategy : options.strategies) {
      const auto seq = build_sequence(ex.drawing, strategy, budget, rng, options.max_noise_strokes);
      auto rec = run_trial(classifier, seq, ex.word, budget, options);
      rec.trial = t;
      rec.example = idx;
      rec.category = ex.word;
      rec.strategy = strategy;
      rec.noise_placement = seq.placement;
      report.records.push_back(std::move(rec));
    }
  }

  for (const auto strategy : options.strategies) {
    StrategySummary s;
    s.strategy = strategy;
    for (const auto& r : report.records) {
      if (r.strategy != strategy) continue;
      ++s.trials;
      s.correct += r.correct;
    }
    s.median_strokes_to_correct = median_strokes(report.records, strategy);
    report.summary.push_back(s);
  }
  return report;
}

double median_strokes(const std::vector<TrialRecord>& records, Strategy strategy) {
  std::vector<double> v;
  for (const auto& r : records)
    if (r.strategy == strategy) v.push_back(static_cast<double>(r.strokes_to_correct));
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

void write_report(const SimulationReport& report, std::ostream& out) {
  for (const auto& r : report.records) {
    nlohmann::ordered_json j;
    j["trial"] = r.trial;
    j["example"] = r.example;
    j["category"] = r.category;
    j["strategy"] = to_string(r.strategy);
    if (!r.noise_placement.empty()) j["noise_placement"] = r.noise_placement;
    j["strokes"] = r.strokes;
    j["strokes_to_correct"] = r.strokes_to_correct;
    j["correct"] = r.correct;
    j["ink_exhausted"] = r.ink_exhausted;
    j["trajectory"] = r.trajectory;
    auto em = nlohmann::ordered_json::array();
    for (const auto& e : r.emissions) {
      em.push_back({{"stroke", e.stroke}, {"word", e.word}, {"confidence", e.confidence},
                    {"ledger", e.ledger}});
    }
    j["emissions"] = std::move(em);
    j["final_top"] = r.final_top;
    out << j.dump() << '\n';
  }
}

void write_summary(const SimulationReport& report, std::ostream& out) {
  out << std::left << std::setw(14) << "strategy" << std::right << std::setw(8) << "trials"
      << std::setw(10) << "correct" << std::setw(16) << "median_strokes" << '\n';
  for (const auto& s : report.summary) {
    out << std::left << std::setw(14) << to_string(s.strategy) << std::right << std::setw(8)
        << s.trials << std::setw(10) << s.correct << std::setw(16) << std::fixed
        << std::setprecision(1) << s.median_strokes_to_correct << '\n';
  }
  out.unsetf(std::ios::fixed);
}

}  // namespace innk::sim
