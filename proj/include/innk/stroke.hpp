#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace innk {

/// Side length of the square canvas shared by ingested and live drawings.
inline constexpr double kCanvasSize = 256.0;

/// Points per stroke when resampling for classifier features.
inline constexpr std::size_t kResampleCount = 64;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Stroke {
  std::vector<Point> points;

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

struct Canvas {
  double width = kCanvasSize;
  double height = kCanvasSize;

  friend bool operator==(const Canvas&, const Canvas&) = default;
};

struct Drawing {
  std::vector<Stroke> strokes;
  Canvas canvas;

  bool empty() const noexcept;
  std::size_t point_count() const noexcept;

  friend bool operator==(const Drawing&, const Drawing&) = default;
};

/// Throws ValidationError if the canvas is degenerate, a stroke is empty, or
/// a point is non-finite or off the canvas.
void validate(const Drawing& d);

/// Same checks for a lone stroke against a canvas.
void validate(const Stroke& s, const Canvas& canvas);

/// Sum of Euclidean segment lengths. Does not validate.
double stroke_length(std::span<const Point> points);

double path_length(const Drawing& d);

/// n points at equal arc-length spacing along s. The first and last points
/// are copied exactly.
Stroke resample_stroke(const Stroke& s, std::size_t n);

/// Same walk over a raw polyline.
std::vector<Point> resample_polyline(std::span<const Point> points, std::size_t n);

/// Translate the bounding box to the origin and scale uniformly so its larger
/// side is 1. A drawing whose bounding box is a single point maps every point
/// to (0.5, 0.5). The result lives on a 1x1 canvas.
Drawing normalize_drawing(const Drawing& d);

/// Longest prefix of s whose arc length is at most max_length, ending on an
/// interpolated point when the cut falls inside a segment.
Stroke truncate_stroke(const Stroke& s, double max_length);

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const noexcept { return max_x - min_x; }
  double height() const noexcept { return max_y - min_y; }
};

/// Throws ArgumentError on a drawing with no points.
BoundingBox bounding_box(const Drawing& d);

}  // namespace innk
