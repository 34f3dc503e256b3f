#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/layout.hpp"

// Text formats: whitespace-separated decimal fields, one record per line,
// '#' starts a comment.
//   edge list:  u v
//   labels:     vertex cluster
//   layout:     vertex x y
//   id map:     dense_id original_id

namespace cq {

namespace detail {

/// Splits one line into whitespace-separated tokens, dropping any comment.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

/// Calls fn(tokens, line_number) for every non-blank, non-comment line.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto tokens = tokenize(text.substr(pos, end - pos));
    if (!tokens.empty()) fn(tokens, line_no);
    pos = end + 1;
  }
}

inline std::int64_t parse_int(std::string_view tok, std::size_t line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + std::string(tok) + "'", line);
  return value;
}

inline std::int64_t parse_vertex(std::string_view tok, std::size_t line) {
  const std::int64_t v = parse_int(tok, line);
  if (v < 0) throw ParseError("negative vertex id " + std::string(tok), line);
  if (v > static_cast<std::int64_t>(std::numeric_limits<Vertex>::max() - 1))
    throw ParseError("vertex id too large: " + std::string(tok), line);
  return v;
}

inline double parse_double(std::string_view tok, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec == std::errc::result_out_of_range)
    throw ParseError("coordinate out of range: '" + std::string(tok) + "'", line);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected a number, got '" + std::string(tok) + "'", line);
  if (!std::isfinite(value))
    throw ParseError("non-finite coordinate '" + std::string(tok) + "'", line);
  return value;
}

inline std::string format_double(double x) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

}  // namespace detail

struct LoadedGraph {
  Graph graph;
  std::size_t dropped_duplicates = 0;
  std::size_t dropped_self_loops = 0;

  std::size_t dropped() const noexcept { return dropped_duplicates + dropped_self_loops; }
};

/// Raw `u v` pairs in file order, ids as written.
inline std::vector<std::pair<std::int64_t, std::int64_t>> read_raw_edges(std::string_view text) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  detail::for_each_record(text, [&](const auto& tok, std::size_t line) {
    if (tok.size() != 2)
      throw ParseError("expected 'u v', found " + std::to_string(tok.size()) + " fields", line);
    raw.emplace_back(detail::parse_vertex(tok[0], line), detail::parse_vertex(tok[1], line));
  });
  if (raw.empty()) throw ParseError("edge list is empty", 0);
  return raw;
}

namespace detail {

inline LoadedGraph build_dedup(std::size_t n, std::span<const std::pair<std::int64_t, std::int64_t>> raw) {
  LoadedGraph out;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (auto [u, v] : raw) {
    if (u == v) {
      ++out.dropped_self_loops;
      continue;
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  std::sort(edges.begin(), edges.end());
  const auto before = edges.size();
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  out.dropped_duplicates = before - edges.size();
  out.graph = Graph(n, std::move(edges));
  return out;
}

}  // namespace detail

/// Dense-id edge list: n = 1 + max id. Duplicate lines and self-loops are
/// dropped and counted.
inline LoadedGraph load_edge_list(std::string_view text) {
  const auto raw = read_raw_edges(text);
  std::int64_t max_id = 0;
  for (auto [u, v] : raw) max_id = std::max({max_id, u, v});
  return detail::build_dedup(static_cast<std::size_t>(max_id) + 1, raw);
}

/// Maps dense vertex ids back to the ids of the source file.
struct IdMap {
  std::vector<std::int64_t> original;  // original[dense] = source id

  std::optional<Vertex> dense_of(std::int64_t id) const {
    auto it = std::lower_bound(original.begin(), original.end(), id);
    if (it == original.end() || *it != id) return std::nullopt;
    return static_cast<Vertex>(it - original.begin());
  }
};

/// Edge list with arbitrary (sparse) ids; ids are renumbered densely in
/// increasing order and the mapping is returned for persisting.
inline std::pair<LoadedGraph, IdMap> load_edge_list_remapped(std::string_view text) {
  auto raw = read_raw_edges(text);
  IdMap map;
  for (auto [u, v] : raw) {
    map.original.push_back(u);
    map.original.push_back(v);
  }
  std::sort(map.original.begin(), map.original.end());
  map.original.erase(std::unique(map.original.begin(), map.original.end()), map.original.end());
  for (auto& [u, v] : raw) {
    u = *map.dense_of(u);
    v = *map.dense_of(v);
  }
  return {detail::build_dedup(map.original.size(), raw), std::move(map)};
}

inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

inline std::string write_id_map(const IdMap& map) {
  std::ostringstream out;
  out << "# dense_id original_id\n";
  for (std::size_t i = 0; i < map.original.size(); ++i) out << i << ' ' << map.original[i] << '\n';
  return out.str();
}

inline IdMap load_id_map(std::string_view text) {
  std::vector<std::pair<std::int64_t, std::int64_t>> rows;
  detail::for_each_record(text, [&](const auto& tok, std::size_t line) {
    if (tok.size() != 2) throw ParseError("expected 'dense original'", line);
    rows.emplace_back(detail::parse_vertex(tok[0], line), detail::parse_int(tok[1], line));
  });
  std::sort(rows.begin(), rows.end());
  IdMap map;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != static_cast<std::int64_t>(i))
      throw ParseError("id map is not dense at " + std::to_string(i), 0);
    map.original.push_back(rows[i].second);
  }
  if (!std::is_sorted(map.original.begin(), map.original.end()))
    throw ParseError("id map original ids must be increasing", 0);
  return map;
}

/// `vertex cluster` records. Every vertex 0..n-1 must appear exactly once;
/// cluster ids may be arbitrary integers and are renumbered densely.
inline ClusterLabeling load_labels(std::string_view text, std::size_t n) {
  std::vector<std::int64_t> raw(n);
  std::vector<bool> seen(n, false);
  detail::for_each_record(text, [&](const auto& tok, std::size_t line) {
    if (tok.size() != 2) throw ParseError("expected 'vertex cluster'", line);
    const auto v = detail::parse_vertex(tok[0], line);
    if (static_cast<std::size_t>(v) >= n)
      throw ParseError("vertex " + std::to_string(v) + " outside graph of " + std::to_string(n) +
                           " vertices",
                       line);
    if (seen[v]) throw ParseError("duplicate label for vertex " + std::to_string(v), line);
    seen[v] = true;
    raw[v] = detail::parse_int(tok[1], line);
  });
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) throw ParseError("no label for vertex " + std::to_string(v), 0);
  return ClusterLabeling::from_raw(raw);
}

inline std::string write_labels(const ClusterLabeling& c) {
  std::ostringstream out;
  for (std::size_t v = 0; v < c.size(); ++v) out << v << ' ' << c[v] << '\n';
  return out.str();
}

/// `vertex x y` records keyed by vertex id, so line order is irrelevant.
/// When `expected_n` is given the file must cover exactly 0..expected_n-1.
inline Layout import_layout(std::string_view text, std::optional<std::size_t> expected_n = {}) {
  std::vector<std::pair<std::int64_t, Point>> rows;
  std::vector<std::size_t> lines;
  detail::for_each_record(text, [&](const auto& tok, std::size_t line) {
    if (tok.size() != 3) throw ParseError("expected 'vertex x y'", line);
    const auto v = detail::parse_vertex(tok[0], line);
    rows.push_back({v, Point{detail::parse_double(tok[1], line), detail::parse_double(tok[2], line)}});
    lines.push_back(line);
  });
  const std::size_t n = expected_n.value_or(rows.size());
  Layout pos(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto v = static_cast<std::size_t>(rows[i].first);
    if (v >= n)
      throw ParseError("vertex " + std::to_string(v) + " outside 0.." + std::to_string(n - 1), lines[i]);
    if (seen[v]) throw ParseError("duplicate vertex " + std::to_string(v), lines[i]);
    seen[v] = true;
    pos[v] = rows[i].second;
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) throw ParseError("missing coordinates for vertex " + std::to_string(v), 0);
  return pos;
}

inline std::string write_layout(std::span<const Point> pos) {
  std::string out;
  for (std::size_t v = 0; v < pos.size(); ++v) {
    out += std::to_string(v);
    out += ' ';
    out += detail::format_double(pos[v].x);
    out += ' ';
    out += detail::format_double(pos[v].y);
    out += '\n';
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes to a sibling temp file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace cq
