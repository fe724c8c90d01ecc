#include "innk/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "innk/errors.hpp"

namespace innk {

FeatureVector extract_features(const Drawing& d) {
  if (d.empty()) throw ArgumentError("cannot extract features from an empty drawing");
  const BoundingBox box = bounding_box(d);
  const Drawing unit = normalize_drawing(d);

  std::vector<Point> trace;
  trace.reserve(unit.point_count());
  double ink = 0.0;
  for (const auto& s : unit.strokes) {
    trace.insert(trace.end(), s.points.begin(), s.points.end());
    ink += stroke_length(s.points);
  }

  FeatureVector f;
  f.reserve(kFeatureDimension);
  for (const auto& p : resample_polyline(trace, kTracePoints)) {
    f.push_back(p.x);
    f.push_back(p.y);
  }
  const auto strokes = std::min(unit.strokes.size(), kStrokeCountCap);
  f.push_back(static_cast<double>(strokes) / static_cast<double>(kStrokeCountCap));
  f.push_back(std::min(ink, kUnitLengthCap) / kUnitLengthCap);
  const double span = box.width() + box.height();
  f.push_back(span > 0.0 ? box.width() / span : 0.5);
  return f;
}

ScoreDistribution::ScoreDistribution(CategoryList categories, std::vector<double> confidence)
    : categories_(std::move(categories)), confidence_(std::move(confidence)) {
  if (!categories_ || categories_->size() != confidence_.size()) {
    throw ArgumentError("distribution size does not match category count");
  }
  double sum = 0.0;
  for (double v : confidence_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("confidence outside [0, 1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("confidences do not sum to 1");
}

ScoreDistribution ScoreDistribution::from_pairs(
    std::initializer_list<std::pair<std::string, double>> pairs) {
  auto cats = std::make_shared<std::vector<std::string>>();
  std::vector<double> values;
  for (const auto& [word, v] : pairs) {
    cats->push_back(word);
    values.push_back(v);
  }
  return ScoreDistribution(std::move(cats), std::move(values));
}

double ScoreDistribution::confidence(std::string_view word) const {
  for (std::size_t i = 0; i < categories_->size(); ++i) {
    if ((*categories_)[i] == word) return confidence_[i];
  }
  return 0.0;
}

std::size_t ScoreDistribution::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < confidence_.size(); ++i) {
    if (confidence_[i] > confidence_[best]) best = i;
  }
  return best;
}

bool GuessLedger::add(std::string word) {
  if (contains(word)) return false;
  words_.push_back(std::move(word));
  return true;
}

bool GuessLedger::contains(std::string_view word) const {
  return std::find(words_.begin(), words_.end(), word) != words_.end();
}

MaskedScores mask_scores(const ScoreDistribution& dist, const GuessLedger& ledger) {
  MaskedScores out;
  out.confidence.assign(dist.size(), 0.0);
  std::vector<bool> alive(dist.size(), false);
  std::size_t survivors = 0;
  double mass = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (ledger.contains(dist.category(i))) continue;
    alive[i] = true;
    ++survivors;
    mass += dist.confidence(i);
  }
  if (survivors == 0) throw StateError("every category is masked");

  bool have_top = false;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (!alive[i]) continue;
    out.confidence[i] = mass > 0.0 ? dist.confidence(i) / mass
                                   : 1.0 / static_cast<double>(survivors);
    if (!have_top || out.confidence[i] > out.confidence[out.top]) {
      out.top = i;
      have_top = true;
    }
  }
  out.top_word = dist.category(out.top);
  out.top_confidence = out.confidence[out.top];
  return out;
}

std::optional<NnGuess> masked_guess(const ScoreDistribution& dist, const GuessLedger& ledger,
                                    double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ArgumentError("confidence threshold must be in [0, 1]");
  }
  auto masked = mask_scores(dist, ledger);
  if (masked.top_confidence < threshold) return std::nullopt;
  return NnGuess{std::move(masked.top_word), masked.top_confidence};
}

KnnIndex::KnnIndex(std::vector<std::string> categories, std::vector<Entry> points, std::size_t k,
                   std::size_t dimension)
    : categories_(std::make_shared<const std::vector<std::string>>(std::move(categories))),
      points_(std::move(points)),
      k_(k),
      dimension_(dimension) {
  if (k_ == 0) throw ArgumentError("k must be at least 1");
  if (points_.empty()) throw ArgumentError("index needs at least one point");
  if (categories_->empty()) throw ArgumentError("index needs at least one category");
  if (k_ > points_.size()) throw ArgumentError("k exceeds the number of index points");
  for (const auto& p : points_) {
    if (p.features.size() != dimension_) throw ArgumentError("feature dimension mismatch");
    if (p.category >= categories_->size()) throw ArgumentError("point category out of range");
    for (double v : p.features) {
      if (!std::isfinite(v)) throw ArgumentError("non-finite feature value");
    }
  }
}

KnnIndex KnnIndex::build(const Dataset& ds, std::size_t k) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  if (ds.empty() || ds.total_examples() == 0) throw ArgumentError("dataset is empty");
  if (k > ds.total_examples()) throw ArgumentError("k exceeds the number of examples");

  std::vector<Entry> points;
  points.reserve(ds.total_examples());
  for (std::size_t c = 0; c < ds.categories().size(); ++c) {
    for (const auto& ex : ds.examples(c)) points.push_back({extract_features(ex.drawing), c});
  }
  return KnnIndex(ds.categories(), std::move(points), k);
}

ScoreDistribution KnnIndex::predict(const Drawing& d) const {
  return predict_features(extract_features(d));
}

ScoreDistribution KnnIndex::predict_features(std::span<const double> query) const {
  if (query.size() != dimension_) throw ArgumentError("query dimension mismatch");

  std::vector<std::pair<double, std::size_t>> ranked(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& f = points_[i].features;
    double sq = 0.0;
    for (std::size_t j = 0; j < dimension_; ++j) {
      const double diff = f[j] - query[j];
      sq += diff * diff;
    }
    ranked[i] = {std::sqrt(sq), i};
  }
  // Pair ordering breaks distance ties by point order.
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k_), ranked.end());

  std::vector<double> weight(categories_->size(), 0.0);
  double total = 0.0;
  for (std::size_t n = 0; n < k_; ++n) {
    const double w = 1.0 / (kDistanceEpsilon + ranked[n].first);
    weight[points_[ranked[n].second].category] += w;
    total += w;
  }
  for (double& w : weight) w /= total;
  return ScoreDistribution(categories_, std::move(weight));
}

}  // namespace innk
