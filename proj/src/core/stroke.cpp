#include "innk/stroke.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "innk/errors.hpp"

namespace innk {

bool Drawing::empty() const noexcept { return point_count() == 0; }

std::size_t Drawing::point_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : strokes) n += s.points.size();
  return n;
}

void validate(const Stroke& s, const Canvas& canvas) {
  if (s.points.empty()) throw ValidationError("stroke has no points");
  for (const auto& p : s.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ValidationError("non-finite point in stroke");
    }
    if (p.x < 0.0 || p.x > canvas.width || p.y < 0.0 || p.y > canvas.height) {
      throw ValidationError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                            ") outside canvas");
    }
  }
}

void validate(const Drawing& d) {
  if (!(d.canvas.width > 0.0) || !(d.canvas.height > 0.0) || !std::isfinite(d.canvas.width) ||
      !std::isfinite(d.canvas.height)) {
    throw ValidationError("canvas dimensions must be positive and finite");
  }
  for (const auto& s : d.strokes) validate(s, d.canvas);
}

double stroke_length(std::span<const Point> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  }
  return total;
}

double path_length(const Drawing& d) {
  validate(d);
  double total = 0.0;
  for (const auto& s : d.strokes) total += stroke_length(s.points);
  return total;
}

std::vector<Point> resample_polyline(std::span<const Point> points, std::size_t n) {
  if (n < 2) throw ArgumentError("resample count must be at least 2");
  if (points.empty()) throw ArgumentError("cannot resample an empty stroke");

  const double total = stroke_length(points);
  std::vector<Point> out;
  out.reserve(n);
  if (total <= 0.0) {
    out.assign(n, points.front());
    return out;
  }

  out.push_back(points.front());
  const double step = total / static_cast<double>(n - 1);
  std::size_t seg = 1;
  double walked = 0.0;  // arc length at points[seg - 1]
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double target = step * static_cast<double>(i);
    while (seg < points.size()) {
      const Point& a = points[seg - 1];
      const Point& b = points[seg];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (walked + len >= target && len > 0.0) {
        const double t = (target - walked) / len;
        out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        break;
      }
      walked += len;
      ++seg;
    }
    if (seg == points.size()) out.push_back(points.back());  // rounding ran past the end
  }
  out.push_back(points.back());
  return out;
}

Stroke resample_stroke(const Stroke& s, std::size_t n) {
  return Stroke{resample_polyline(s.points, n)};
}

BoundingBox bounding_box(const Drawing& d) {
  bool seen = false;
  BoundingBox box;
  for (const auto& s : d.strokes) {
    for (const auto& p : s.points) {
      if (!seen) {
        box = {p.x, p.y, p.x, p.y};
        seen = true;
        continue;
      }
      box.min_x = std::min(box.min_x, p.x);
      box.min_y = std::min(box.min_y, p.y);
      box.max_x = std::max(box.max_x, p.x);
      box.max_y = std::max(box.max_y, p.y);
    }
  }
  if (!seen) throw ArgumentError("drawing has no points");
  return box;
}

Drawing normalize_drawing(const Drawing& d) {
  validate(d);
  const BoundingBox box = bounding_box(d);
  const double side = std::max(box.width(), box.height());

  Drawing out;
  out.canvas = {1.0, 1.0};
  out.strokes.reserve(d.strokes.size());
  for (const auto& s : d.strokes) {
    Stroke ns;
    ns.points.reserve(s.points.size());
    for (const auto& p : s.points) {
      if (side > 0.0) {
        ns.points.push_back({(p.x - box.min_x) / side, (p.y - box.min_y) / side});
      } else {
        ns.points.push_back({0.5, 0.5});
      }
    }
    out.strokes.push_back(std::move(ns));
  }
  return out;
}

Stroke truncate_stroke(const Stroke& s, double max_length) {
  if (s.points.empty()) return {};
  if (!(max_length > 0.0)) return Stroke{{s.points.front()}};

  Stroke out;
  out.points.push_back(s.points.front());
  double walked = 0.0;
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    const Point& a = s.points[i - 1];
    const Point& b = s.points[i];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (walked + len <= max_length) {
      out.points.push_back(b);
      walked += len;
      continue;
    }
    const double t = (max_length - walked) / len;
    out.points.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    break;
  }
  return out;
}

}  // namespace innk
