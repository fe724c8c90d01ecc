#include "innk/tools/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "innk/errors.hpp"
#include "innk/words.hpp"

namespace innk::synth {

namespace {

using Path = std::vector<Point>;
using Shape = std::vector<Path>;

constexpr double kPi = std::numbers::pi;

Path arc(double cx, double cy, double r, double from, double to, int steps) {
  Path p;
  for (int i = 0; i <= steps; ++i) {
    const double a = from + (to - from) * i / steps;
    p.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return p;
}

// Shapes are authored in a [-1, 1] box and placed on the canvas later.
Shape template_for(std::string_view name, Rng& rng) {
  if (name == "line") return {{{-1, 0}, {1, 0}}};
  if (name == "circle") {
    const double start = rng.uniform(0, 2 * kPi);
    return {arc(0, 0, 1, start, start + 2 * kPi * rng.uniform(0.95, 1.05), 24)};
  }
  if (name == "square") {
    if (rng.uniform() < 0.7) return {{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}}};
    return {{{-1, -1}, {1, -1}, {1, 1}}, {{1, 1}, {-1, 1}, {-1, -1}}};
  }
  if (name == "triangle") return {{{0, -1}, {1, 1}, {-1, 1}, {0, -1}}};
  if (name == "zigzag") {
    Path p;
    const int teeth = 4 + static_cast<int>(rng.below(3));
    for (int i = 0; i <= teeth; ++i) p.push_back({-1.0 + 2.0 * i / teeth, i % 2 ? -0.4 : 0.4});
    return {p};
  }
  if (name == "star") {
    Path p;
    for (int i = 0; i <= 5; ++i) {
      const double a = -kPi / 2 + i * 4 * kPi / 5;
      p.push_back({std::cos(a), std::sin(a)});
    }
    return {p};
  }
  if (name == "t-shape") return {{{-1, -1}, {1, -1}}, {{0, -1}, {0, 1}}};
  if (name == "spiral") {
    Path p;
    for (int i = 0; i <= 40; ++i) {
      const double t = i / 40.0;
      const double a = t * 4 * kPi;
      p.push_back({t * std::cos(a), t * std::sin(a)});
    }
    return {p};
  }
  if (name == "cross") return {{{-1, -1}, {1, 1}}, {{1, -1}, {-1, 1}}};
  if (name == "wave") {
    Path p;
    for (int i = 0; i <= 32; ++i) {
      const double t = i / 32.0;
      p.push_back({-1 + 2 * t, 0.35 * std::sin(t * 4 * kPi)});
    }
    return {p};
  }
  throw ArgumentError("unknown synthetic category '" + std::string(name) + "'");
}

double clamp_coord(double v) {
  return std::clamp(std::round(v), 0.0, static_cast<double>(kMaxSourceCoordinate));
}

}  // namespace

const std::vector<std::string>& shape_names() {
  static const std::vector<std::string> names = {"line",    "circle", "square", "triangle",
                                                 "zigzag",  "star",   "t-shape", "spiral",
                                                 "cross",   "wave"};
  return names;
}

bool is_shape(std::string_view name) {
  const auto& names = shape_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

LabeledDrawing draw_shape(std::string_view shape, Rng& rng) {
  const std::string word = canonical_word(shape);
  Shape tpl = template_for(word, rng);

  const double scale = rng.uniform(60, 110);
  const double aspect = rng.uniform(0.85, 1.15);
  const double angle = rng.normal(0.0, 0.12);
  const double cx = rng.uniform(115, 141);
  const double cy = rng.uniform(115, 141);
  const double jitter = 2.0;

  LabeledDrawing ld;
  ld.word = word;
  ld.recognized = true;
  for (const Path& path : tpl) {
    Stroke s;
    for (const Point& p : path) {
      const double x = p.x * scale * aspect;
      const double y = p.y * scale / aspect;
      const double rx = x * std::cos(angle) - y * std::sin(angle);
      const double ry = x * std::sin(angle) + y * std::cos(angle);
      s.points.push_back({clamp_coord(cx + rx + rng.normal(0, jitter)),
                          clamp_coord(cy + ry + rng.normal(0, jitter))});
    }
    ld.drawing.strokes.push_back(std::move(s));
  }
  return ld;
}

std::vector<LabeledDrawing> generate_corpus(const std::vector<std::string>& shapes,
                                            std::size_t per_category, std::uint64_t seed) {
  for (const auto& s : shapes) {
    if (!is_shape(canonical_word(s))) {
      throw ArgumentError("unknown synthetic category '" + s + "'");
    }
  }
  Rng rng(seed);
  std::vector<LabeledDrawing> out;
  out.reserve(shapes.size() * per_category);
  for (const auto& s : shapes) {
    for (std::size_t i = 0; i < per_category; ++i) out.push_back(draw_shape(s, rng));
  }
  return out;
}

void write_corpus(const std::vector<LabeledDrawing>& corpus, std::ostream& out) {
  for (const auto& ld : corpus) out << to_ndjson_line(ld) << '\n';
}

}  // namespace innk::synth
