#include "uasforge/source.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "uasforge/error.hpp"

namespace uasforge {

SourceUnit::SourceUnit(std::string path, std::string text)
    : path_(std::move(path)), text_(std::move(text)) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text_.size(); ++i)
    if (text_[i] == '\n')
      line_starts_.push_back(i + 1);
}

std::shared_ptr<const SourceUnit> SourceUnit::from_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("IoError", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::make_shared<SourceUnit>(path, ss.str());
}

std::pair<std::uint32_t, std::uint32_t> SourceUnit::line_col(std::size_t offset) const {
  offset = std::min(offset, text_.size());
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  const auto line = static_cast<std::size_t>(it - line_starts_.begin());
  const auto start = line_starts_[line - 1];
  return {static_cast<std::uint32_t>(line), static_cast<std::uint32_t>(offset - start + 1)};
}

std::string Diagnostic::format() const {
  std::ostringstream out;
  if (!file.empty())
    out << file << ':';
  if (span.line > 0)
    out << span.line << ':' << span.col << ':';
  if (!file.empty() || span.line > 0)
    out << ' ';
  out << (severity == Severity::error ? "error: " : "warning: ") << message;
  return out.str();
}

std::string format_all(const Diagnostics &diags) {
  std::string out;
  for (const auto &d : diags) {
    if (!out.empty())
      out += '\n';
    out += d.format();
  }
  return out;
}

} // namespace uasforge
