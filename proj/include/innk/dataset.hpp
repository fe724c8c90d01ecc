#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "innk/stroke.hpp"

namespace innk {

/// Largest coordinate value in the simplified Quick Draw format.
inline constexpr int kMaxSourceCoordinate = 255;

inline constexpr double kDefaultInkMultiplier = 1.5;

struct LabeledDrawing {
  std::string word;
  Drawing drawing;
  bool recognized = true;

  friend bool operator==(const LabeledDrawing&, const LabeledDrawing&) = default;
};

/// Parses one line of the simplified ndjson format. `source` and `line` are
/// only used to label errors. Throws ParseError.
LabeledDrawing parse_ndjson_line(std::string_view text, std::string_view source = {},
                                 std::size_t line = 0);

/// Inverse of parse_ndjson_line for drawings with integral coordinates in
/// [0, 255]. Emits `word`, `recognized`, `drawing` in that order.
std::string to_ndjson_line(const LabeledDrawing& ld);

/// Immutable after load. Categories keep first-seen order (or the requested
/// order when a category list was given to load_dataset).
class Dataset {
 public:
  Dataset() = default;

  /// Throws ArgumentError if a drawing's word is not in `categories` or a
  /// category is duplicated.
  Dataset(std::vector<std::string> categories, std::vector<LabeledDrawing> examples);

  const std::vector<std::string>& categories() const noexcept { return categories_; }
  const std::vector<LabeledDrawing>& examples(std::size_t category) const {
    return examples_.at(category);
  }
  const std::vector<LabeledDrawing>& examples(std::string_view word) const;
  std::optional<std::size_t> index_of(std::string_view word) const;
  std::size_t total_examples() const noexcept;
  bool empty() const noexcept { return categories_.empty(); }

 private:
  std::vector<std::string> categories_;
  std::vector<std::vector<LabeledDrawing>> examples_;
};

struct LoadOptions {
  std::size_t per_category_cap = 0;  ///< 0 = unlimited
  bool require_recognized = true;
  bool lenient = false;  ///< skip unparseable lines instead of failing
  /// When non-empty, only these categories are kept and each must end up with
  /// at least one example.
  std::vector<std::string> categories{};
};

struct LoadResult {
  Dataset dataset;
  std::size_t skipped_lines = 0;
  std::size_t unrecognized_lines = 0;
};

/// Reads ndjson files in the given order. Throws ParseError on the first bad
/// line unless lenient, LoadError when a category ends up without examples,
/// and Error when a file cannot be opened.
LoadResult load_dataset(const std::vector<std::filesystem::path>& paths,
                        const LoadOptions& options = {});

class InkBudgetTable {
 public:
  InkBudgetTable() = default;
  InkBudgetTable(double multiplier, std::map<std::string, double> budgets);

  double multiplier() const noexcept { return multiplier_; }
  /// Throws ArgumentError for an unknown word.
  double budget(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::map<std::string, double, std::less<>>& budgets() const noexcept { return budgets_; }

  /// Same table with every budget rescaled to a new multiplier.
  InkBudgetTable with_multiplier(double multiplier) const;

  std::string to_json() const;
  static InkBudgetTable from_json(std::string_view text);

 private:
  double multiplier_ = kDefaultInkMultiplier;
  std::map<std::string, double, std::less<>> budgets_;
};

/// budget(c) = multiplier * mean path_length over c's examples.
InkBudgetTable compute_ink_budgets(const Dataset& ds, double multiplier = kDefaultInkMultiplier);

}  // namespace innk
