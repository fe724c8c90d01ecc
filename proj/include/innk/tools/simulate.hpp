#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "innk/classifier.hpp"
#include "innk/dataset.hpp"

namespace innk::sim {

// Headless replay of drawings through the NN side of a round, to compare how
// drawing strategies affect when the NN first names the true category.

enum class Strategy { Clean, Noise, RebusPrefix };

std::string_view to_string(Strategy s);
/// "clean", "noise" or "rebus-prefix". Throws ArgumentError otherwise.
Strategy parse_strategy(std::string_view name);

struct SimulationOptions {
  /// Every trial runs each of these on the same example.
  std::vector<Strategy> strategies{Strategy::Clean};
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double threshold = kDefaultConfidenceThreshold;
  /// Off: emit the raw argmax and ignore the ledger.
  bool masking = true;
  /// Cap on crosshatch strokes added by the noise strategy.
  std::size_t max_noise_strokes = 6;
};

struct Emission {
  std::size_t stroke = 0;  ///< 1-based
  std::string word;
  double confidence = 0.0;
  /// Wrong guesses on record when this one was made.
  std::vector<std::string> ledger;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t example = 0;  ///< index into the example list
  std::string category;
  Strategy strategy = Strategy::Clean;
  std::string noise_placement;  ///< "prepend" or "interleave"; empty otherwise
  std::size_t strokes = 0;      ///< strokes in the replayed sequence
  /// Stroke at which the true label was first emitted, or strokes + 1.
  std::size_t strokes_to_correct = 0;
  bool correct = false;
  bool ink_exhausted = false;
  /// Top confidence after each replayed stroke.
  std::vector<double> trajectory;
  std::vector<Emission> emissions;
  std::string final_top;
};

struct StrategySummary {
  Strategy strategy = Strategy::Clean;
  std::size_t trials = 0;
  std::size_t correct = 0;
  double median_strokes_to_correct = 0.0;
};

struct SimulationReport {
  std::vector<TrialRecord> records;  ///< trial-major, strategies in option order
  std::vector<StrategySummary> summary;
};

/// Runs `options.trials` trials. Trial i picks its example and noise from a
/// generator seeded by (seed, i) alone, so any subset of trials reproduces.
SimulationReport simulate(const Classifier& classifier, const InkBudgetTable& budgets,
                          std::span<const LabeledDrawing> examples,
                          const SimulationOptions& options);

/// Median of strokes_to_correct over one strategy's records; 0 when empty.
double median_strokes(const std::vector<TrialRecord>& records, Strategy strategy);

void write_report(const SimulationReport& report, std::ostream& ndjson);
void write_summary(const SimulationReport& report, std::ostream& out);

}  // namespace innk::sim
