#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "innk/errors.hpp"
#include "innk/stroke.hpp"

namespace innk::testing {

inline std::filesystem::path golden_dir() { return INNK_GOLDEN_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

inline std::vector<std::string> read_lines_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

/// Directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("innk_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline Drawing drawing_of(std::vector<std::vector<Point>> strokes) {
  Drawing d;
  for (auto& pts : strokes) d.strokes.push_back(Stroke{std::move(pts)});
  return d;
}

/// Error kinds as named in tests/golden/ndjson/malformed.tsv.
inline const std::map<std::string, ParseErrorKind>& parse_error_names() {
  static const std::map<std::string, ParseErrorKind> names = {
      {"malformed_json", ParseErrorKind::MalformedJson},
      {"not_an_object", ParseErrorKind::NotAnObject},
      {"missing_field", ParseErrorKind::MissingField},
      {"wrong_field_type", ParseErrorKind::WrongFieldType},
      {"empty_word", ParseErrorKind::EmptyWord},
      {"empty_drawing", ParseErrorKind::EmptyDrawing},
      {"bad_stroke_shape", ParseErrorKind::BadStrokeShape},
      {"length_mismatch", ParseErrorKind::LengthMismatch},
      {"empty_stroke", ParseErrorKind::EmptyStroke},
      {"non_integer_coordinate", ParseErrorKind::NonIntegerCoordinate},
      {"coordinate_out_of_range", ParseErrorKind::CoordinateOutOfRange},
  };
  return names;
}

}  // namespace innk::testing
