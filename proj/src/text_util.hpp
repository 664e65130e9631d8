// Copyright 2026 The dipeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Line-oriented helpers shared by the text formats (map, state, case,
// anchor table). Private to the library.

#ifndef DIPEQ_SRC_TEXT_UTIL_HPP
#define DIPEQ_SRC_TEXT_UTIL_HPP

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dipeq/error.hpp"

namespace dipeq::text {

struct Token {
  std::string text;
  int column = 1;  // 1-based
};

// One logical line with comments stripped.
struct Line {
  int number = 0;
  std::string raw;
  std::vector<Token> tokens;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    out.push_back({std::string(s.substr(i, j - i)), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

// Splits a document into non-empty lines, dropping '#' comments.
inline std::vector<Line> split_lines(std::string_view doc) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= doc.size()) {
    std::size_t end = doc.find('\n', start);
    if (end == std::string_view::npos) end = doc.size();
    ++number;
    std::string_view raw = doc.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::size_t hash = raw.find('#');
    std::string_view body = hash == std::string_view::npos ? raw : raw.substr(0, hash);
    auto tokens = tokenize(body);
    if (!tokens.empty()) lines.push_back({number, std::string(body), std::move(tokens)});
    if (end == doc.size()) break;
    start = end + 1;
  }
  return lines;
}

// Text after the first `skip` tokens of a line, trimmed.
inline std::string rest_of_line(const Line& line, std::size_t skip) {
  if (skip >= line.tokens.size()) return "";
  std::string s = line.raw.substr(line.tokens[skip].column - 1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shortest-roundtrip-safe rendering with 17 significant digits.
inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

[[noreturn]] inline void syntax_error(const Line& line, std::size_t token,
                                      const std::string& message) {
  int column = token < line.tokens.size() ? line.tokens[token].column
                                          : static_cast<int>(line.raw.size()) + 1;
  throw SyntaxError(message, line.number, column);
}

}  // namespace dipeq::text

#endif  // DIPEQ_SRC_TEXT_UTIL_HPP
