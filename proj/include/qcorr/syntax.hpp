#pragma once

// Text syntax shared by the CLI: dimension lists, 1-based index sets,
// partitions "{1}|{2,3}" and split trees "(1,(2,3))".

#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcorr/entropy.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/partition.hpp"

namespace qcorr {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline std::size_t parse_count(std::string_view tok, std::string_view what) {
  tok = trim(tok);
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size()) {
    throw PreconditionError(std::string(what) + ": '" + std::string(tok) + "' is not a nonnegative integer");
  }
  return v;
}

}  // namespace detail

/// "4,4,2" -> {4, 4, 2}.
inline Dims parse_dims(std::string_view text) {
  Dims out;
  for (auto tok : detail::split(text, ',')) {
    const std::size_t d = detail::parse_count(tok, "dimension list");
    if (d < 1) throw PreconditionError("dimension list: dimensions must be >= 1");
    out.push_back(d);
  }
  return out;
}

/// "0.5,0.3,0.2" -> {0.5, 0.3, 0.2}.
inline std::vector<double> parse_real_list(std::string_view text, std::string_view what = "number list") {
  std::vector<double> out;
  for (auto tok : detail::split(text, ',')) {
    tok = detail::trim(tok);
    try {
      std::size_t used = 0;
      const double v = std::stod(std::string(tok), &used);
      if (used != tok.size()) throw std::invalid_argument("trailing");
      out.push_back(v);
    } catch (const std::exception&) {
      throw PreconditionError(std::string(what) + ": '" + std::string(tok) + "' is not a number");
    }
  }
  return out;
}

/// "{1,3}" or "1,3" (1-based) -> {0, 2}, validated against n subsystems. "{}" is empty.
inline IndexSet parse_index_set(std::string_view text, std::size_t n) {
  text = detail::trim(text);
  if (!text.empty() && text.front() == '{') {
    if (text.back() != '}') throw PreconditionError("index set '" + std::string(text) + "': unbalanced brace");
    text = detail::trim(text.substr(1, text.size() - 2));
  }
  IndexSet out;
  if (text.empty()) return out;
  for (auto tok : detail::split(text, ',')) {
    const std::size_t i = detail::parse_count(tok, "index set");
    if (i < 1) throw PreconditionError("index set: subsystem labels start at 1");
    out.push_back(i - 1);
  }
  return normalize_index_set(std::move(out), n);
}

/// "{1}|{2,3}" -> partition of n subsystems.
inline Partition parse_partition(std::string_view text, std::size_t n) {
  std::vector<IndexSet> clusters;
  for (auto part : detail::split(text, '|')) clusters.push_back(parse_index_set(part, n));
  return Partition(n, std::move(clusters));
}

/// "(1,(2,3))" or "({1},({2},{3}))" with 1-based leaves -> SplitTree (not yet validated against N).
inline SplitTree parse_split_tree(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) -> SplitTree {
    throw PreconditionError("split tree '" + std::string(text) + "' at offset " + std::to_string(pos) +
                            ": " + why);
  };
  auto parse = [&](auto&& self) -> SplitTree {
    skip_ws();
    if (pos >= text.size()) return fail("unexpected end");
    if (text[pos] == '(') {
      ++pos;
      SplitTree left = self(self);
      skip_ws();
      if (pos >= text.size() || text[pos] != ',') return fail("expected ','");
      ++pos;
      SplitTree right = self(self);
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') return fail("expected ')' (nodes are binary)");
      ++pos;
      return SplitTree::node(std::move(left), std::move(right));
    }
    const bool braced = text[pos] == '{';
    if (braced) {
      ++pos;
      skip_ws();
    }
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) return fail("expected a subsystem label or '('");
    const std::size_t label = detail::parse_count(text.substr(start, pos - start), "split tree");
    if (label < 1) return fail("subsystem labels start at 1");
    if (braced) {
      skip_ws();
      if (pos >= text.size() || text[pos] != '}') return fail("expected '}' (leaves are single subsystems)");
      ++pos;
    }
    return SplitTree::leaf(label - 1);
  };
  SplitTree t = parse(parse);
  skip_ws();
  if (pos != text.size()) fail("trailing characters");
  return t;
}

}  // namespace qcorr
