#pragma once

// Artifact writers. Numbers are printed in the shortest form that reads
// back to the same double, so reruns are byte-identical; files appear atomically
// (written to a sibling temporary, then renamed).

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace afc::io {

/// Shortest round-trip decimal; "nan"/"inf" for non-finite values.
std::string format_double(double x);

/// Writes `content` to `path` via `path.tmp` + rename. Creates parent dirs.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

std::string read_text(const std::filesystem::path& path);

/// Column-major CSV builder with a header row. Empty columns are written as
/// empty fields (used for curves that are undefined on part of the axis).
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  /// A NaN entry is written as an empty field.
  std::size_t rows() const { return rows_; }
  std::string str() const { return out_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string out_;
};

}  // namespace afc::io
