#include <gtest/gtest.h>

#include <sstream>

#include "innk/dataset.hpp"
#include "innk/errors.hpp"
#include "innk/tools/synth.hpp"
#include "test_support.hpp"

namespace innk {
namespace {

using testing::golden_dir;
using testing::read_lines;
using testing::TempDir;

LabeledDrawing labeled(std::string word, std::vector<std::vector<Point>> strokes) {
  return {std::move(word), testing::drawing_of(std::move(strokes)), true};
}

TEST(ParseLine, MinimalOneStrokeObject) {
  const auto ld = parse_ndjson_line(R"({"word":"line","recognized":true,"drawing":[[[0,255],[0,0]]]})");
  EXPECT_EQ(ld.word, "line");
  EXPECT_TRUE(ld.recognized);
  EXPECT_EQ(ld.drawing.canvas, (Canvas{256, 256}));
  ASSERT_EQ(ld.drawing.strokes.size(), 1u);
  EXPECT_EQ(ld.drawing.strokes[0].points, (std::vector<Point>{{0, 0}, {255, 0}}));
}

TEST(ParseLine, LengthMismatchIsParseError) {
  try {
    parse_ndjson_line(R"({"word":"line","recognized":true,"drawing":[[[0,1,2],[0,1]]]})", "f.ndjson",
                      7);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::LengthMismatch);
    EXPECT_EQ(e.line(), 7u);
    EXPECT_NE(std::string(e.what()).find("f.ndjson:7"), std::string::npos);
  }
}

TEST(ParseLine, RealCatSampleMatchesScriptCounts) {
  // Counts taken from a throwaway json-module script over the same line:
  // 10 strokes with 16,5,5,2,2,3,2,2,2,2 points, path length 700.041172827524.
  const auto lines = read_lines(golden_dir() / "ndjson" / "cat_sample.ndjson");
  ASSERT_EQ(lines.size(), 1u);
  const auto ld = parse_ndjson_line(lines[0]);
  EXPECT_EQ(ld.word, "cat");
  const std::vector<std::size_t> expected = {16, 5, 5, 2, 2, 3, 2, 2, 2, 2};
  ASSERT_EQ(ld.drawing.strokes.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(ld.drawing.strokes[i].points.size(), expected[i]) << "stroke " << i;
  }
  EXPECT_NEAR(path_length(ld.drawing), 700.04117282752395, 1e-9);
}

TEST(ParseLine, CanonicalizesWord) {
  const auto ld =
      parse_ndjson_line(R"({"word":"  The  Eiffel Tower ","recognized":false,"drawing":[[[1],[2]]]})");
  EXPECT_EQ(ld.word, "the eiffel tower");
  EXPECT_FALSE(ld.recognized);
}

TEST(ParseLine, MalformedCorpusYieldsDocumentedKinds) {
  const auto lines = read_lines(golden_dir() / "ndjson" / "malformed.tsv");
  ASSERT_GE(lines.size(), 10u);
  for (const auto& row : lines) {
    const auto tab = row.find('\t');
    const auto kind = testing::parse_error_names().at(row.substr(0, tab));
    try {
      parse_ndjson_line(row.substr(tab + 1));
      ADD_FAILURE() << "accepted: " << row;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), kind) << row << " -> " << e.what();
    }
  }
}

TEST(ParseLine, CanonicalGoldenLinesRoundTrip) {
  for (const auto& line : read_lines(golden_dir() / "ndjson" / "canonical.ndjson")) {
    EXPECT_EQ(to_ndjson_line(parse_ndjson_line(line)), line);
  }
}

TEST(ParseLine, IsDeterministic) {
  const auto line = read_lines(golden_dir() / "ndjson" / "cat_sample.ndjson")[0];
  EXPECT_EQ(parse_ndjson_line(line), parse_ndjson_line(line));
}

TEST(ToNdjson, RejectsNonIntegralCoordinates) {
  EXPECT_THROW(to_ndjson_line(labeled("x", {{{0.5, 1}}})), ArgumentError);
}

std::string synth_text(const std::vector<std::string>& shapes, std::size_t n, std::uint64_t seed) {
  std::ostringstream out;
  synth::write_corpus(synth::generate_corpus(shapes, n, seed), out);
  return out.str();
}

TEST(LoadDataset, CapLimitsEachCategory) {
  TempDir dir;
  const auto a = dir.write("a.ndjson", synth_text({"line", "circle"}, 150, 1));
  const auto b = dir.write("b.ndjson", synth_text({"square"}, 150, 2));
  const auto res = load_dataset({a, b}, {.per_category_cap = 100});
  ASSERT_EQ(res.dataset.categories(), (std::vector<std::string>{"line", "circle", "square"}));
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(res.dataset.examples(c).size(), 100u);
}

TEST(LoadDataset, LenientSkipsAndCountsBadLines) {
  TempDir dir;
  const std::string good = R"({"word":"line","recognized":true,"drawing":[[[0,9],[0,0]]]})";
  const auto f = dir.write("f.ndjson", good + "\n" + good + "\n{oops\n" + good + "\n");
  const auto res = load_dataset({f}, {.lenient = true});
  EXPECT_EQ(res.dataset.total_examples(), 3u);
  EXPECT_EQ(res.skipped_lines, 1u);
}

TEST(LoadDataset, StrictFailsOnFirstBadLineWithContext) {
  TempDir dir;
  const std::string good = R"({"word":"line","recognized":true,"drawing":[[[0,9],[0,0]]]})";
  const auto f = dir.write("f.ndjson", good + "\n{oops\n");
  try {
    load_dataset({f});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.source(), f.string());
  }
}

TEST(LoadDataset, DeskCorpusCounts) {
  // 10 shapes x 200 lines; the oracle is the line count of the written file.
  TempDir dir;
  const auto text = synth_text(synth::shape_names(), 200, 5);
  const auto f = dir.write("desk.ndjson", text);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2000);
  const auto res = load_dataset({f});
  EXPECT_EQ(res.dataset.categories().size(), 10u);
  EXPECT_EQ(res.dataset.total_examples(), 2000u);
  EXPECT_EQ(res.skipped_lines, 0u);
}

TEST(LoadDataset, RecognizedFilterAndEmptyCategoryError) {
  TempDir dir;
  const auto f = dir.write(
      "f.ndjson",
      R"({"word":"line","recognized":true,"drawing":[[[0,9],[0,0]]]})"
      "\n"
      R"({"word":"Dog","recognized":false,"drawing":[[[0,9],[0,0]]]})"
      "\n");
  try {
    load_dataset({f});
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("dog"), std::string::npos);
  }
  const auto res = load_dataset({f}, {.require_recognized = false});
  EXPECT_EQ(res.dataset.categories(), (std::vector<std::string>{"line", "dog"}));
}

TEST(LoadDataset, RequestedCategoryMissingIsLoadError) {
  TempDir dir;
  const auto f = dir.write("f.ndjson", synth_text({"line"}, 3, 1));
  EXPECT_THROW(load_dataset({f}, {.categories = {"line", "zebra"}}), LoadError);
  const auto res = load_dataset({f}, {.categories = {"LINE"}});
  EXPECT_EQ(res.dataset.categories(), (std::vector<std::string>{"line"}));
}

TEST(LoadDataset, SmallerCapIsPrefix) {
  TempDir dir;
  const auto f = dir.write("f.ndjson", synth_text({"star", "wave"}, 40, 9));
  const auto big = load_dataset({f}, {.per_category_cap = 30}).dataset;
  const auto small = load_dataset({f}, {.per_category_cap = 12}).dataset;
  for (std::size_t c = 0; c < 2; ++c) {
    ASSERT_EQ(small.examples(c).size(), 12u);
    for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(small.examples(c)[i], big.examples(c)[i]);
  }
}

TEST(LoadDataset, MissingFileIsError) {
  EXPECT_THROW(load_dataset({"/nonexistent/file.ndjson"}), Error);
}

Dataset line_dataset(std::vector<double> lengths) {
  std::vector<LabeledDrawing> ex;
  for (double len : lengths) ex.push_back(labeled("line", {{{0, 0}, {len, 0}}}));
  return Dataset({"line"}, std::move(ex));
}

TEST(InkBudgets, MeanTimesMultiplier) {
  // (10 + 20) / 2 * 1.5 = 22.5
  EXPECT_DOUBLE_EQ(compute_ink_budgets(line_dataset({10, 20}), 1.5).budget("line"), 22.5);
}

TEST(InkBudgets, SingleExampleIdentity) {
  EXPECT_DOUBLE_EQ(compute_ink_budgets(line_dataset({37}), 1.0).budget("line"), 37.0);
}

TEST(InkBudgets, RejectsBadMultiplier) {
  EXPECT_THROW(compute_ink_budgets(line_dataset({10}), 0.0), ArgumentError);
  EXPECT_THROW(compute_ink_budgets(line_dataset({10}), -1.0), ArgumentError);
}

TEST(InkBudgets, RejectsEmptyCategory) {
  Dataset ds({"line", "dot"}, {labeled("line", {{{0, 0}, {5, 0}}})});
  EXPECT_THROW(compute_ink_budgets(ds, 1.5), ArgumentError);
}

TEST(InkBudgets, LinearInMultiplierAndBoundedByExtremes) {
  const auto ds = Dataset(synth::shape_names(), synth::generate_corpus(synth::shape_names(), 30, 4));
  const auto one = compute_ink_budgets(ds, 1.25);
  const auto two = compute_ink_budgets(ds, 2.5);
  for (const auto& word : ds.categories()) {
    EXPECT_NEAR(two.budget(word), 2 * one.budget(word), 1e-9 * two.budget(word));
    double lo = 1e300, hi = 0;
    for (const auto& ex : ds.examples(word)) {
      lo = std::min(lo, path_length(ex.drawing));
      hi = std::max(hi, path_length(ex.drawing));
    }
    EXPECT_GE(one.budget(word), 1.25 * lo * (1 - 1e-12));
    EXPECT_LE(one.budget(word), 1.25 * hi * (1 + 1e-12));
  }
}

TEST(InkBudgets, JsonRoundTripAndRescale) {
  const auto table = compute_ink_budgets(line_dataset({10, 20}), 1.5);
  const auto back = InkBudgetTable::from_json(table.to_json());
  EXPECT_EQ(back.multiplier(), 1.5);
  EXPECT_EQ(back.budget("line"), 22.5);
  EXPECT_DOUBLE_EQ(back.with_multiplier(3.0).budget("line"), 45.0);
  EXPECT_THROW(InkBudgetTable::from_json("{}"), ArgumentError);
}

}  // namespace
}  // namespace innk
