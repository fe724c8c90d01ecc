#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "innk/classifier.hpp"
#include "innk/errors.hpp"

namespace innk {

namespace {

constexpr std::array<char, 8> kMagic = {'I', 'N', 'N', 'K', 'I', 'D', 'X', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error("index snapshot is truncated");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void save_index(const KnnIndex& index, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(index.k()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(index.dimension()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(index.categories().size()));
  for (const auto& word : index.categories()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(word.size()));
    out.write(word.data(), static_cast<std::streamsize>(word.size()));
  }
  put<std::uint64_t>(out, index.points().size());
  for (const auto& p : index.points()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.category));
    for (double v : p.features) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw Error("failed writing index snapshot");
}

KnnIndex load_index(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error("not an index snapshot");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw Error("unsupported index snapshot version " + std::to_string(version));
  }
  const auto k = get<std::uint32_t>(in);
  const auto dimension = get<std::uint32_t>(in);
  const auto category_count = get<std::uint32_t>(in);

  std::vector<std::string> categories;
  categories.reserve(category_count);
  for (std::uint32_t c = 0; c < category_count; ++c) {
    const auto len = get<std::uint32_t>(in);
    std::string word(len, '\0');
    if (!in.read(word.data(), len)) throw Error("index snapshot is truncated");
    categories.push_back(std::move(word));
  }

  const auto count = get<std::uint64_t>(in);
  std::vector<KnnIndex::Entry> points;
  points.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
  for (std::uint64_t i = 0; i < count; ++i) {
    KnnIndex::Entry e;
    e.category = get<std::uint32_t>(in);
    e.features.reserve(dimension);
    for (std::uint32_t j = 0; j < dimension; ++j) {
      e.features.push_back(std::bit_cast<double>(get<std::uint64_t>(in)));
    }
    points.push_back(std::move(e));
  }
  return KnnIndex(std::move(categories), std::move(points), k, dimension);
}

}  // namespace innk
