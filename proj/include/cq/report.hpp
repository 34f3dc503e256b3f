#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cq/error.hpp"
#include "cq/experiments.hpp"
#include "cq/graph.hpp"
#include "cq/layout.hpp"
#include "cq/metrics.hpp"

namespace cq {

using Rgb = std::uint32_t;  // 0xRRGGBB

/// Kelly's contrast colours without white and black.
inline std::vector<Rgb> default_palette() {
  return {0xF3C300, 0x875692, 0xF38400, 0xA1CAF1, 0xBE0032, 0xC2B280, 0x848482, 0x008856, 0xE68FAC, 0x0067A5,
          0xF99379, 0x604E97, 0xF6A600, 0xB3446C, 0xDCD300, 0x882D17, 0x8DB600, 0x654522, 0xE25822, 0x2B3D26};
}

struct RenderStyle {
  double width = 800.0;
  double height = 800.0;
  double margin = 20.0;
  double node_radius = 3.0;
  double edge_width = 0.6;
  double edge_opacity = 0.25;
  std::vector<Rgb> palette = default_palette();

  void validate() const {
    if (!(node_radius > 0.0)) throw InvalidArgument("node radius must be > 0");
    if (palette.empty()) throw InvalidArgument("palette must not be empty");
    if (!(width > 2.0 * margin && height > 2.0 * margin)) throw InvalidArgument("canvas smaller than its margins");
    if (!(edge_opacity >= 0.0 && edge_opacity <= 1.0)) throw InvalidArgument("edge opacity must be in [0,1]");
  }
};

namespace detail {

inline Rgb shade(Rgb c, double factor) {
  auto channel = [&](int shift) {
    double v = static_cast<double>((c >> shift) & 0xFF);
    v = factor < 1.0 ? v * factor : v + (255.0 - v) * (factor - 1.0);
    return static_cast<Rgb>(std::clamp(std::lround(v), 0L, 255L)) << shift;
  };
  return channel(16) | channel(8) | channel(0);
}

inline std::string hex(Rgb c) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s = "#";
  for (int shift = 20; shift >= 0; shift -= 4) s += digits[(c >> shift) & 0xF];
  return s;
}

/// Fixed two-decimal text, independent of locale.
inline std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string svg_open(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(w) + "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"#ffffff\"/>\n";
}

}  // namespace detail

/// Palette entry for a cluster. Past the palette length the base colours
/// repeat darker, then lighter, then cycle.
inline Rgb cluster_color(const RenderStyle& style, ClusterId c) {
  const std::size_t size = style.palette.size();
  const Rgb base = style.palette[c % size];
  switch ((c / size) % 3) {
    case 1: return detail::shade(base, 0.6);
    case 2: return detail::shade(base, 1.45);
    default: return base;
  }
}

/// Maps layout coordinates into the canvas (y up), uniform scale, centred.
struct CanvasTransform {
  double scale = 1.0, ox = 0.0, oy = 0.0, height = 0.0;

  CanvasTransform(std::span<const Point> pos, const RenderStyle& style) : height(style.height) {
    const BoundingBox box = bounding_box(pos);
    const double aw = style.width - 2.0 * style.margin, ah = style.height - 2.0 * style.margin;
    const double w = box.width(), h = box.height();
    if (w > 0.0 || h > 0.0) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      scale = std::min(w > 0.0 ? aw / w : inf, h > 0.0 ? ah / h : inf);
    }
    ox = style.margin + 0.5 * (aw - w * scale) - box.min_x * scale;
    oy = style.margin + 0.5 * (ah - h * scale) - box.min_y * scale;
  }

  Point operator()(Point p) const { return {ox + p.x * scale, height - (oy + p.y * scale)}; }
};

/// Edges first, then one circle per vertex filled by cluster.
inline std::string render_drawing(const Graph& g, std::span<const Point> layout, const ClusterLabeling& labels,
                                  const RenderStyle& style = {}) {
  style.validate();
  const std::size_t n = g.vertex_count();
  if (layout.size() != n || labels.size() != n)
    throw InvalidArgument("layout and labeling must cover all " + std::to_string(n) + " vertices");
  require_finite(layout, "render");

  std::string out = detail::svg_open(style.width, style.height);
  if (n == 0) return out + "</svg>\n";
  const CanvasTransform tf(layout, style);
  std::vector<Point> at(n);
  for (std::size_t v = 0; v < n; ++v) at[v] = tf(layout[v]);

  out += "<g stroke=\"#555555\" stroke-width=\"" + detail::num(style.edge_width) + "\" stroke-opacity=\"" +
         detail::num(style.edge_opacity) + "\">\n";
  for (const Edge& e : g.edges()) {
    out += "<line x1=\"" + detail::num(at[e.u].x) + "\" y1=\"" + detail::num(at[e.u].y) + "\" x2=\"" +
           detail::num(at[e.v].x) + "\" y2=\"" + detail::num(at[e.v].y) + "\"/>\n";
  }
  out += "</g>\n<g stroke=\"#222222\" stroke-width=\"0.3\">\n";
  const std::string r = detail::num(style.node_radius);
  for (std::size_t v = 0; v < n; ++v) {
    out += "<circle cx=\"" + detail::num(at[v].x) + "\" cy=\"" + detail::num(at[v].y) + "\" r=\"" + r + "\" fill=\"" +
           detail::hex(cluster_color(style, labels[static_cast<Vertex>(v)])) + "\"/>\n";
  }
  return out + "</g>\n</svg>\n";
}

// ---------------------------------------------------------------------------
// Charts

enum class ChartKind { line, bars };

inline constexpr std::array<Rgb, kMetricCount> kMetricColors{0x1f77b4, 0xff7f0e, 0x2ca02c, 0xd62728, 0x9467bd};
inline constexpr std::array<const char*, kMetricCount> kMetricLabels{"CQ_ARI", "CQ_AMI", "CQ_FMI", "CQ_HOM",
                                                                     "CQ_CMP"};

struct ChartStyle {
  double width = 720.0;
  double height = 420.0;
  double left = 56.0, right = 130.0, top = 40.0, bottom = 56.0;
};

/// Line chart (one line per metric over the keys, e.g. steps) or grouped
/// bars (one group per key, e.g. layout). The y axis is always [0,1]; values
/// below 0 are drawn at 0 with a downward marker, missing values are skipped.
inline std::string render_series_chart(const Aggregate& data, ChartKind kind, std::string_view title = {},
                                       const ChartStyle& style = {}) {
  if (data.keys.empty()) throw InvalidArgument("chart needs at least one key");
  using detail::num;
  const double pw = style.width - style.left - style.right;
  const double ph = style.height - style.top - style.bottom;
  if (!(pw > 0.0 && ph > 0.0)) throw InvalidArgument("chart canvas too small");
  const std::size_t count = data.keys.size();
  auto ypos = [&](double v) { return style.top + ph * (1.0 - std::clamp(v, 0.0, 1.0)); };

  std::string out = detail::svg_open(style.width, style.height);
  if (!title.empty())
    out += "<text x=\"" + num(style.left + pw / 2) + "\" y=\"" + num(style.top / 2 + 6) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" + detail::xml_escape(title) +
           "</text>\n";

  // Grid and y axis.
  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0, y = ypos(v);
    out += "<line x1=\"" + num(style.left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(style.left + pw) + "\" y2=\"" +
           num(y) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + num(style.left - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + num(v) +
           "</text>\n";
  }
  out += "<line x1=\"" + num(style.left) + "\" y1=\"" + num(style.top) + "\" x2=\"" + num(style.left) + "\" y2=\"" +
         num(style.top + ph) + "\" stroke=\"#000000\"/>\n";
  out += "<line x1=\"" + num(style.left) + "\" y1=\"" + num(style.top + ph) + "\" x2=\"" + num(style.left + pw) +
         "\" y2=\"" + num(style.top + ph) + "\" stroke=\"#000000\"/>\n";

  auto xcenter = [&](std::size_t i) {
    if (kind == ChartKind::line) return count == 1 ? style.left + pw / 2 : style.left + pw * i / (count - 1.0);
    return style.left + pw * (i + 0.5) / static_cast<double>(count);
  };
  for (std::size_t i = 0; i < count; ++i)
    out += "<text x=\"" + num(xcenter(i)) + "\" y=\"" + num(style.top + ph + 16) + "\" text-anchor=\"middle\">" +
           detail::xml_escape(data.keys[i]) + "</text>\n";
  out += "</g>\n";

  auto clamp_marker = [&](double x) {
    const double y = style.top + ph;
    return "<polygon class=\"clamped\" points=\"" + num(x - 4) + "," + num(y - 8) + " " + num(x + 4) + "," +
           num(y - 8) + " " + num(x) + "," + num(y) + "\" fill=\"#000000\"/>\n";
  };

  for (std::size_t m = 0; m < kMetricCount; ++m) {
    const std::string color = detail::hex(kMetricColors[m]);
    out += "<g class=\"" + std::string(kMetricNames[m]) + "\">\n";
    if (kind == ChartKind::line) {
      std::string points;
      for (std::size_t i = 0; i < count; ++i) {
        const double v = data.means[i][m];
        if (!std::isfinite(v)) continue;
        if (!points.empty()) points += ' ';
        points += num(xcenter(i)) + "," + num(ypos(v));
      }
      if (!points.empty())
        out += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
      for (std::size_t i = 0; i < count; ++i) {
        const double v = data.means[i][m];
        if (!std::isfinite(v)) continue;
        out += "<circle cx=\"" + num(xcenter(i)) + "\" cy=\"" + num(ypos(v)) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        if (v < 0.0) out += clamp_marker(xcenter(i));
      }
    } else {
      const double group = pw / static_cast<double>(count);
      const double bar = group * 0.8 / static_cast<double>(kMetricCount);
      for (std::size_t i = 0; i < count; ++i) {
        const double v = data.means[i][m];
        if (!std::isfinite(v)) continue;
        const double x = style.left + group * i + group * 0.1 + bar * m;
        const double y = ypos(v);
        out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar) + "\" height=\"" +
               num(style.top + ph - y) + "\" fill=\"" + color + "\"/>\n";
        if (v < 0.0) out += clamp_marker(x + bar / 2);
      }
    }
    out += "</g>\n";
  }

  out += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    const double x = style.left + pw + 16, y = style.top + 8 + 20.0 * m;
    out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"12\" height=\"12\" fill=\"" +
           detail::hex(kMetricColors[m]) + "\"/>\n";
    out += "<text x=\"" + num(x + 18) + "\" y=\"" + num(y + 10) + "\">" + kMetricLabels[m] + "</text>\n";
  }
  return out + "</g>\n</svg>\n";
}

/// `<dataset>_<layout>[_step<t>].svg`, with characters outside
/// [A-Za-z0-9.-] replaced by '-'.
inline std::string svg_file_name(std::string_view dataset, std::string_view layout, std::optional<int> step = {}) {
  auto clean = [](std::string_view s) {
    std::string out(s);
    for (char& c : out)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')) c = '-';
    return out;
  };
  std::string name = clean(dataset) + "_" + clean(layout);
  if (step) name += "_step" + std::to_string(*step);
  return name + ".svg";
}

}  // namespace cq
