#include "innk/dataset.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "innk/errors.hpp"
#include "innk/words.hpp"

namespace innk {

namespace {

using nlohmann::json;

const json& require_field(const json& obj, const char* name, std::string_view source,
                          std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ParseError(ParseErrorKind::MissingField, name, std::string(source), line);
  }
  return *it;
}

Stroke parse_stroke(const json& js, std::size_t index, std::string_view source, std::size_t line) {
  const std::string where = "stroke " + std::to_string(index);
  if (!js.is_array() || js.size() != 2 || !js[0].is_array() || !js[1].is_array()) {
    throw ParseError(ParseErrorKind::BadStrokeShape, where + " is not [xs, ys]",
                     std::string(source), line);
  }
  const json& xs = js[0];
  const json& ys = js[1];
  if (xs.size() != ys.size()) {
    throw ParseError(ParseErrorKind::LengthMismatch,
                     where + ": " + std::to_string(xs.size()) + " x vs " +
                         std::to_string(ys.size()) + " y",
                     std::string(source), line);
  }
  if (xs.empty()) {
    throw ParseError(ParseErrorKind::EmptyStroke, where, std::string(source), line);
  }

  auto coord = [&](const json& v) {
    if (!v.is_number_integer()) {
      throw ParseError(ParseErrorKind::NonIntegerCoordinate, where + ": " + v.dump(),
                       std::string(source), line);
    }
    const auto c = v.get<std::int64_t>();
    if (c < 0 || c > kMaxSourceCoordinate) {
      throw ParseError(ParseErrorKind::CoordinateOutOfRange, where + ": " + std::to_string(c),
                       std::string(source), line);
    }
    return static_cast<double>(c);
  };

  Stroke s;
  s.points.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) s.points.push_back({coord(xs[i]), coord(ys[i])});
  return s;
}

}  // namespace

LabeledDrawing parse_ndjson_line(std::string_view text, std::string_view source, std::size_t line) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);

  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::MalformedJson, e.what(), std::string(source), line);
  }
  if (!obj.is_object()) {
    throw ParseError(ParseErrorKind::NotAnObject, {}, std::string(source), line);
  }

  const json& word = require_field(obj, "word", source, line);
  const json& recognized = require_field(obj, "recognized", source, line);
  const json& drawing = require_field(obj, "drawing", source, line);
  if (!word.is_string()) {
    throw ParseError(ParseErrorKind::WrongFieldType, "word must be a string", std::string(source),
                     line);
  }
  if (!recognized.is_boolean()) {
    throw ParseError(ParseErrorKind::WrongFieldType, "recognized must be a boolean",
                     std::string(source), line);
  }
  if (!drawing.is_array()) {
    throw ParseError(ParseErrorKind::WrongFieldType, "drawing must be an array",
                     std::string(source), line);
  }

  LabeledDrawing out;
  out.word = canonical_word(word.get<std::string>());
  if (out.word.empty()) throw ParseError(ParseErrorKind::EmptyWord, {}, std::string(source), line);
  out.recognized = recognized.get<bool>();
  if (drawing.empty()) {
    throw ParseError(ParseErrorKind::EmptyDrawing, {}, std::string(source), line);
  }
  out.drawing.canvas = {kCanvasSize, kCanvasSize};
  out.drawing.strokes.reserve(drawing.size());
  for (std::size_t i = 0; i < drawing.size(); ++i) {
    out.drawing.strokes.push_back(parse_stroke(drawing[i], i, source, line));
  }
  return out;
}

std::string to_ndjson_line(const LabeledDrawing& ld) {
  nlohmann::ordered_json strokes = nlohmann::ordered_json::array();
  for (const auto& s : ld.drawing.strokes) {
    nlohmann::ordered_json xs = nlohmann::ordered_json::array();
    nlohmann::ordered_json ys = nlohmann::ordered_json::array();
    for (const auto& p : s.points) {
      for (double v : {p.x, p.y}) {
        if (v != std::floor(v) || v < 0.0 || v > kMaxSourceCoordinate) {
          throw ArgumentError("coordinate " + std::to_string(v) +
                              " is not an integer in [0, 255]");
        }
      }
      xs.push_back(static_cast<int>(p.x));
      ys.push_back(static_cast<int>(p.y));
    }
    strokes.push_back({std::move(xs), std::move(ys)});
  }
  nlohmann::ordered_json obj;
  obj["word"] = ld.word;
  obj["recognized"] = ld.recognized;
  obj["drawing"] = std::move(strokes);
  return obj.dump();
}

Dataset::Dataset(std::vector<std::string> categories, std::vector<LabeledDrawing> examples)
    : categories_(std::move(categories)), examples_(categories_.size()) {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (categories_[i] == categories_[j]) {
        throw ArgumentError("duplicate category '" + categories_[i] + "'");
      }
    }
  }
  for (auto& ex : examples) {
    auto idx = index_of(ex.word);
    if (!idx) throw ArgumentError("example word '" + ex.word + "' is not a category");
    examples_[*idx].push_back(std::move(ex));
  }
}

const std::vector<LabeledDrawing>& Dataset::examples(std::string_view word) const {
  auto idx = index_of(word);
  if (!idx) throw ArgumentError("unknown category '" + std::string(word) + "'");
  return examples_[*idx];
}

std::optional<std::size_t> Dataset::index_of(std::string_view word) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i] == word) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::total_examples() const noexcept {
  std::size_t n = 0;
  for (const auto& v : examples_) n += v.size();
  return n;
}

LoadResult load_dataset(const std::vector<std::filesystem::path>& paths,
                        const LoadOptions& options) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::vector<LabeledDrawing>> kept;

  const bool restricted = !options.categories.empty();
  for (const auto& c : options.categories) {
    std::string w = canonical_word(c);
    if (slot.contains(w)) continue;
    slot.emplace(w, order.size());
    order.push_back(std::move(w));
    kept.emplace_back();
  }

  LoadResult result;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    const std::string source = path.string();
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
      ++line_no;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;

      LabeledDrawing ld;
      try {
        ld = parse_ndjson_line(text, source, line_no);
      } catch (const ParseError&) {
        if (!options.lenient) throw;
        ++result.skipped_lines;
        continue;
      }

      auto it = slot.find(ld.word);
      if (it == slot.end()) {
        if (restricted) continue;
        it = slot.emplace(ld.word, order.size()).first;
        order.push_back(ld.word);
        kept.emplace_back();
      }
      if (options.require_recognized && !ld.recognized) {
        ++result.unrecognized_lines;
        continue;
      }
      auto& bucket = kept[it->second];
      if (options.per_category_cap > 0 && bucket.size() >= options.per_category_cap) continue;
      bucket.push_back(std::move(ld));
    }
  }

  std::vector<LabeledDrawing> flat;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (kept[i].empty()) throw LoadError("no usable examples for category '" + order[i] + "'");
    for (auto& ex : kept[i]) flat.push_back(std::move(ex));
  }
  result.dataset = Dataset(std::move(order), std::move(flat));
  return result;
}

InkBudgetTable::InkBudgetTable(double multiplier, std::map<std::string, double> budgets)
    : multiplier_(multiplier), budgets_(budgets.begin(), budgets.end()) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
    throw ArgumentError("ink multiplier must be positive and finite");
  }
  for (const auto& [word, b] : budgets_) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw ArgumentError("ink budget for '" + word + "' must be positive and finite");
    }
  }
}

double InkBudgetTable::budget(std::string_view word) const {
  auto it = budgets_.find(word);
  if (it == budgets_.end()) throw ArgumentError("no ink budget for '" + std::string(word) + "'");
  return it->second;
}

bool InkBudgetTable::contains(std::string_view word) const { return budgets_.contains(word); }

InkBudgetTable InkBudgetTable::with_multiplier(double multiplier) const {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
    throw ArgumentError("ink multiplier must be positive and finite");
  }
  std::map<std::string, double> scaled;
  for (const auto& [word, b] : budgets_) scaled.emplace(word, b / multiplier_ * multiplier);
  return InkBudgetTable(multiplier, std::move(scaled));
}

std::string InkBudgetTable::to_json() const {
  nlohmann::ordered_json obj;
  obj["multiplier"] = multiplier_;
  obj["budgets"] = nlohmann::ordered_json::object();
  for (const auto& [word, b] : budgets_) obj["budgets"][word] = b;
  return obj.dump(2);
}

InkBudgetTable InkBudgetTable::from_json(std::string_view text) {
  try {
    const auto obj = json::parse(text);
    std::map<std::string, double> budgets;
    for (const auto& [word, b] : obj.at("budgets").items()) {
      budgets.emplace(canonical_word(word), b.get<double>());
    }
    return InkBudgetTable(obj.at("multiplier").get<double>(), std::move(budgets));
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("invalid ink budget file: ") + e.what());
  }
}

InkBudgetTable compute_ink_budgets(const Dataset& ds, double multiplier) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
    throw ArgumentError("ink multiplier must be positive and finite");
  }
  std::map<std::string, double> budgets;
  for (std::size_t c = 0; c < ds.categories().size(); ++c) {
    const auto& examples = ds.examples(c);
    if (examples.empty()) {
      throw ArgumentError("category '" + ds.categories()[c] + "' has no examples");
    }
    double sum = 0.0;
    for (const auto& ex : examples) sum += path_length(ex.drawing);
    const double mean = sum / static_cast<double>(examples.size());
    if (!(mean > 0.0)) {
      throw ArgumentError("category '" + ds.categories()[c] + "' has zero mean path length");
    }
    budgets.emplace(ds.categories()[c], multiplier * mean);
  }
  return InkBudgetTable(multiplier, std::move(budgets));
}

}  // namespace innk
