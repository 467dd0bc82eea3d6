#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csplin {

/// Machine-readable report format: ordered `key: value` lines. Values are
/// single-line; keys are dotted paths.
using StructuredDoc = std::vector<std::pair<std::string, std::string>>;

inline std::string write_structured(const StructuredDoc& doc) {
  std::string out;
  for (const auto& [k, v] : doc) {
    if (v.find('\n') != std::string::npos)
      throw std::invalid_argument("structured value must be single-line: " + k);
    out += k;
    out += ": ";
    out += v;
    out += '\n';
  }
  return out;
}

inline StructuredDoc read_structured(std::string_view text) {
  StructuredDoc doc;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (line.empty()) continue;
    std::size_t sep = line.find(": ");
    if (sep == std::string_view::npos)
      throw std::invalid_argument("structured line " + std::to_string(lineno) + " lacks ': '");
    doc.emplace_back(std::string(line.substr(0, sep)), std::string(line.substr(sep + 2)));
  }
  return doc;
}

inline const std::string* structured_find(const StructuredDoc& doc, std::string_view key) {
  for (const auto& [k, v] : doc)
    if (k == key) return &v;
  return nullptr;
}

}  // namespace csplin
