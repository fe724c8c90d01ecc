#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "innk/dataset.hpp"
#include "innk/stroke.hpp"

namespace innk {

using FeatureVector = std::vector<double>;

// Feature layout: resampled flattened trace (x0, y0, x1, y1, ...), then
// stroke count, ink length and aspect ratio.
inline constexpr std::size_t kTracePoints = kResampleCount;
inline constexpr std::size_t kStrokeCountCap = 16;
inline constexpr double kUnitLengthCap = 8.0;
inline constexpr std::size_t kFeatureDimension = 2 * kTracePoints + 3;
inline constexpr std::size_t kStrokeCountFeature = 2 * kTracePoints;
inline constexpr std::size_t kLengthFeature = kStrokeCountFeature + 1;
inline constexpr std::size_t kAspectFeature = kStrokeCountFeature + 2;

inline constexpr std::size_t kDefaultNeighbors = 9;
inline constexpr double kDistanceEpsilon = 1e-6;
inline constexpr double kDefaultConfidenceThreshold = 0.5;

/// Scale-invariant features of the normalized drawing. Throws ArgumentError
/// for a drawing without points.
FeatureVector extract_features(const Drawing& d);

using CategoryList = std::shared_ptr<const std::vector<std::string>>;

/// Per-category confidences, parallel to the classifier's category order.
class ScoreDistribution {
 public:
  /// Throws ArgumentError unless sizes match, every value is in [0, 1] and
  /// the values sum to 1 within 1e-9.
  ScoreDistribution(CategoryList categories, std::vector<double> confidence);

  /// Convenience for hand-built distributions.
  static ScoreDistribution from_pairs(
      std::initializer_list<std::pair<std::string, double>> pairs);

  std::size_t size() const noexcept { return confidence_.size(); }
  const std::vector<std::string>& categories() const noexcept { return *categories_; }
  const std::string& category(std::size_t i) const { return categories_->at(i); }
  std::span<const double> values() const noexcept { return confidence_; }
  double confidence(std::size_t i) const { return confidence_.at(i); }
  /// 0 for a word that is not a category.
  double confidence(std::string_view word) const;
  /// Highest confidence; ties go to the earliest category.
  std::size_t argmax() const;

 private:
  CategoryList categories_;
  std::vector<double> confidence_;
};

/// Words already guessed wrong this round, in the order they were rejected.
class GuessLedger {
 public:
  /// Returns false if the word was already present.
  bool add(std::string word);
  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  void clear() noexcept { words_.clear(); }

  friend bool operator==(const GuessLedger&, const GuessLedger&) = default;

 private:
  std::vector<std::string> words_;
};

struct NnGuess {
  std::string word;
  double confidence = 0.0;

  friend bool operator==(const NnGuess&, const NnGuess&) = default;
};

/// Distribution after removing ledger words and renormalizing the survivors.
struct MaskedScores {
  std::vector<double> confidence;  ///< 0 for masked entries
  std::size_t top = 0;
  std::string top_word;
  double top_confidence = 0.0;
};

/// Throws StateError when every category is masked. When the surviving mass
/// is zero it is spread evenly over the survivors.
MaskedScores mask_scores(const ScoreDistribution& dist, const GuessLedger& ledger);

/// The NN's public guess: the top surviving category when its renormalized
/// confidence reaches the threshold. Throws ArgumentError for a threshold
/// outside [0, 1].
std::optional<NnGuess> masked_guess(const ScoreDistribution& dist, const GuessLedger& ledger,
                                    double threshold);

/// Anything that turns a drawing into a distribution over a fixed category
/// list. Implementations must be immutable and safe for concurrent predict().
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual const std::vector<std::string>& categories() const noexcept = 0;
  virtual ScoreDistribution predict(const Drawing& d) const = 0;
};

/// Inverse-distance weighted k-nearest-neighbour classifier over
/// extract_features() vectors.
class KnnIndex final : public Classifier {
 public:
  struct Entry {
    FeatureVector features;
    std::size_t category = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Throws ArgumentError for k = 0, no points, a dimension mismatch or an
  /// out-of-range category.
  KnnIndex(std::vector<std::string> categories, std::vector<Entry> points, std::size_t k,
           std::size_t dimension = kFeatureDimension);

  /// One point per example. Throws ArgumentError for k = 0, an empty dataset
  /// or k larger than the number of examples.
  static KnnIndex build(const Dataset& ds, std::size_t k = kDefaultNeighbors);

  const std::vector<std::string>& categories() const noexcept override { return *categories_; }
  ScoreDistribution predict(const Drawing& d) const override;
  ScoreDistribution predict_features(std::span<const double> query) const;

  std::size_t k() const noexcept { return k_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Entry>& points() const noexcept { return points_; }

  friend bool operator==(const KnnIndex& a, const KnnIndex& b) {
    return *a.categories_ == *b.categories_ && a.points_ == b.points_ && a.k_ == b.k_ &&
           a.dimension_ == b.dimension_;
  }

 private:
  CategoryList categories_;
  std::vector<Entry> points_;
  std::size_t k_;
  std::size_t dimension_;
};

/// Versioned little-endian binary snapshot; doubles are stored as their raw
/// IEEE-754 bits so a save/load cycle is bit-exact.
void save_index(const KnnIndex& index, std::ostream& out);
KnnIndex load_index(std::istream& in);

}  // namespace innk
