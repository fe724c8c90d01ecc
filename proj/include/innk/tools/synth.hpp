#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "innk/dataset.hpp"
#include "innk/rng.hpp"

namespace innk::synth {

/// Shapes the generator knows how to draw, in a fixed order.
const std::vector<std::string>& shape_names();

bool is_shape(std::string_view name);

/// One jittered drawing of `shape` on the 256x256 integer grid. Throws
/// ArgumentError for an unknown shape.
LabeledDrawing draw_shape(std::string_view shape, Rng& rng);

/// `per_category` drawings of each shape, grouped by shape in the given order.
/// Deterministic in `seed`.
std::vector<LabeledDrawing> generate_corpus(const std::vector<std::string>& shapes,
                                            std::size_t per_category, std::uint64_t seed);

/// Writes the corpus as ndjson, one drawing per line.
void write_corpus(const std::vector<LabeledDrawing>& corpus, std::ostream& out);

}  // namespace innk::synth
