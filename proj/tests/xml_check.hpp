#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace battleflow::testing {

// Minimal XML well-formedness check covering what the SVG writer can emit:
// a prolog, elements with quoted attributes, self-closing tags, text and
// entity references. Returns an empty string when well-formed, otherwise a
// description of the first problem.
inline std::string xml_problem(std::string_view s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool root_seen = false;
  const auto name_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.'; };
  if (s.substr(0, 5) == "<?xml") {
    const auto end = s.find("?>");
    if (end == std::string_view::npos) return "unterminated prolog";
    i = end + 2;
  }
  while (i < s.size()) {
    if (s[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i]))) return "text outside root";
      if (s[i] == '&') {
        const auto semi = s.find(';', i);
        const std::string_view ent = s.substr(i, semi == std::string_view::npos ? 0 : semi - i + 1);
        if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;") return "bad entity";
      }
      ++i;
      continue;
    }
    if (s.substr(i, 2) == "</") {
      std::size_t j = i + 2;
      while (j < s.size() && name_char(s[j])) ++j;
      const std::string name(s.substr(i + 2, j - i - 2));
      if (j >= s.size() || s[j] != '>') return "bad end tag " + name;
      if (stack.empty() || stack.back() != name) return "mismatched end tag " + name;
      stack.pop_back();
      i = j + 1;
      continue;
    }
    std::size_t j = i + 1;
    while (j < s.size() && name_char(s[j])) ++j;
    const std::string name(s.substr(i + 1, j - i - 1));
    if (name.empty()) return "empty tag name";
    if (stack.empty()) {
      if (root_seen) return "second root element";
      root_seen = true;
    }
    std::vector<std::string> attrs;
    while (true) {
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j >= s.size()) return "unterminated tag " + name;
      if (s[j] == '>') {
        stack.push_back(name);
        ++j;
        break;
      }
      if (s.substr(j, 2) == "/>") {
        j += 2;
        break;
      }
      std::size_t k = j;
      while (k < s.size() && name_char(s[k])) ++k;
      const std::string attr(s.substr(j, k - j));
      if (attr.empty() || k + 1 >= s.size() || s[k] != '=' || s[k + 1] != '"') return "bad attribute in " + name;
      for (const auto& a : attrs)
        if (a == attr) return "duplicate attribute " + attr;
      attrs.push_back(attr);
      const auto close = s.find('"', k + 2);
      if (close == std::string_view::npos) return "unterminated attribute";
      if (s.substr(k + 2, close - k - 2).find('<') != std::string_view::npos) return "'<' in attribute";
      j = close + 1;
    }
    i = j;
  }
  if (!stack.empty()) return "unclosed element " + stack.back();
  if (!root_seen) return "no root element";
  return {};
}

inline std::size_t count_of(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string_view::npos; p = hay.find(needle, p + needle.size())) ++n;
  return n;
}

}  // namespace battleflow::testing
