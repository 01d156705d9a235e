#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace uasforge {

/// A loaded model file. Owns the text and an index of line starts so byte
/// offsets can be mapped back to line/column pairs for diagnostics.
class SourceUnit {
public:
  SourceUnit(std::string path, std::string text);

  static std::shared_ptr<const SourceUnit> from_file(const std::string &path);

  const std::string &path() const { return path_; }
  const std::string &text() const { return text_; }

  /// 1-based line and column for a byte offset. Offsets past the end clamp
  /// to the end of input.
  std::pair<std::uint32_t, std::uint32_t> line_col(std::size_t offset) const;

  std::size_t line_count() const { return line_starts_.size(); }

private:
  std::string path_;
  std::string text_;
  std::vector<std::size_t> line_starts_;
};

/// Location of a syntax element. Locations never take part in structural
/// equality, so ASTs parsed from differently formatted text compare equal.
struct SourceLoc {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
  std::uint32_t line = 0;
  std::uint32_t col = 0;

  friend bool operator==(const SourceLoc &, const SourceLoc &) { return true; }
};

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string message;
  SourceLoc span;
  std::string file;

  std::string format() const;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics &diags) {
  for (const auto &d : diags)
    if (d.severity == Severity::error)
      return true;
  return false;
}

std::string format_all(const Diagnostics &diags);

} // namespace uasforge
