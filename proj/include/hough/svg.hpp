#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hough/accumulator.hpp"
#include "hough/errors.hpp"
#include "hough/family.hpp"
#include "hough/pipeline.hpp"
#include "hough/synthdata.hpp"

namespace hough {

inline const char* bucket_color(Bucket b) {
  switch (b) {
    case Bucket::Cyan:
      return "#00b7c7";
    case Bucket::Green:
      return "#2ca02c";
    case Bucket::Yellow:
      return "#d4b000";
    case Bucket::Orange:
      return "#ff7f0e";
    case Bucket::Red:
      return "#d62728";
    case Bucket::Magenta:
      return "#c000c0";
    default:
      return "#999999";
  }
}

struct SvgCurve {
  ParamPoint lambda;
  std::string color = "#000000";
  bool dashed = false;
};

struct SvgOptions {
  int size = 600;           // plot area edge in pixels
  int margin = 50;
  int resolution = 300;     // marching-squares cells per axis
  double point_radius = 1.6;
};

namespace detail {

inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

/// Maps a window onto a square plot area with y pointing up.
struct Viewport {
  Window w;
  SvgOptions opt;
  [[nodiscard]] double sx(double x) const {
    return opt.margin + (x - w.x_range.lo) / w.x_range.width() * opt.size;
  }
  [[nodiscard]] double sy(double y) const {
    return opt.margin + (w.y_range.hi - y) / w.y_range.width() * opt.size;
  }
};

inline void svg_open(std::ostringstream& s, const SvgOptions& opt) {
  const int total = opt.size + 2 * opt.margin;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total
    << "\" viewBox=\"0 0 " << total << ' ' << total << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << total << "\" height=\"" << total
    << "\" fill=\"#ffffff\"/>\n";
}

inline void svg_axes(std::ostringstream& s, const Viewport& vp, const std::string& xname,
                     const std::string& yname) {
  const auto& o = vp.opt;
  s << "<rect x=\"" << o.margin << "\" y=\"" << o.margin << "\" width=\"" << o.size
    << "\" height=\"" << o.size << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  s << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#000000\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = vp.w.x_range.lo + vp.w.x_range.width() * k / 4.0;
    const double fy = vp.w.y_range.lo + vp.w.y_range.width() * k / 4.0;
    s << "<text x=\"" << px(vp.sx(fx)) << "\" y=\"" << o.margin + o.size + 16
      << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    s << "<text x=\"" << o.margin - 6 << "\" y=\"" << px(vp.sy(fy) + 4)
      << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  s << "<text x=\"" << o.margin + o.size / 2 << "\" y=\"" << o.margin + o.size + 36
    << "\" text-anchor=\"middle\">" << xname << "</text>\n";
  s << "<text x=\"14\" y=\"" << o.margin + o.size / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << o.margin + o.size / 2 << ")\">" << yname << "</text>\n";
  s << "</g>\n";
}

/// Zero set of f over the window as line segments (marching squares).
template <typename F>
std::vector<std::array<double, 4>> contour_segments(F&& f, const Window& w, int n) {
  std::vector<double> val(static_cast<std::size_t>(n + 1) * (n + 1));
  auto xs = [&](int i) { return w.x_range.lo + w.x_range.width() * i / n; };
  auto ys = [&](int j) { return w.y_range.lo + w.y_range.width() * j / n; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) val[static_cast<std::size_t>(i) * (n + 1) + j] = f(xs(i), ys(j));
  auto v = [&](int i, int j) { return val[static_cast<std::size_t>(i) * (n + 1) + j]; };
  std::vector<std::array<double, 4>> segs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double c[4] = {v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)};
      const double cx[4] = {xs(i), xs(i + 1), xs(i + 1), xs(i)};
      const double cy[4] = {ys(j), ys(j), ys(j + 1), ys(j + 1)};
      bool ok = true;
      for (double q : c) ok = ok && std::isfinite(q);
      if (!ok) continue;
      std::vector<std::pair<double, double>> hits;
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if ((c[a] < 0) != (c[b] < 0)) {
          const double t = c[a] / (c[a] - c[b]);
          hits.emplace_back(cx[a] + t * (cx[b] - cx[a]), cy[a] + t * (cy[b] - cy[a]));
        }
      }
      if (hits.size() == 2) {
        segs.push_back({hits[0].first, hits[0].second, hits[1].first, hits[1].second});
      } else if (hits.size() == 4) {
        // Saddle: pair edges by the sign of the cell center.
        const double mid = 0.25 * (c[0] + c[1] + c[2] + c[3]);
        if ((mid < 0) == (c[0] < 0)) {
          segs.push_back({hits[0].first, hits[0].second, hits[1].first, hits[1].second});
          segs.push_back({hits[2].first, hits[2].second, hits[3].first, hits[3].second});
        } else {
          segs.push_back({hits[0].first, hits[0].second, hits[3].first, hits[3].second});
          segs.push_back({hits[1].first, hits[1].second, hits[2].first, hits[2].second});
        }
      }
    }
  return segs;
}

}  // namespace detail

/// Points and curves over `view`. Curve points are black, noise points grey;
/// curves are drawn in the given order, so the last one is on top.
inline void render_overlay_svg(std::ostream& out, const FamilyDefinition& fam,
                               const LabeledPoints& points, const std::vector<SvgCurve>& curves,
                               const Window& view, const SvgOptions& opt = {}) {
  if (points.size() == 0 && curves.empty()) throw argument_error("nothing to render");
  const detail::Viewport vp{view, opt};
  std::ostringstream s;
  detail::svg_open(s, opt);
  s << "<defs><clipPath id=\"plot\"><rect x=\"" << opt.margin << "\" y=\"" << opt.margin
    << "\" width=\"" << opt.size << "\" height=\"" << opt.size << "\"/></clipPath></defs>\n";
  s << "<g clip-path=\"url(#plot)\">\n";
  for (auto label : {PointLabel::Noise, PointLabel::Curve}) {
    const char* color = label == PointLabel::Curve ? "#000000" : "#a0a0a0";
    s << "<g fill=\"" << color << "\">\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (points.labels[k] != label) continue;
      const auto& p = points.points[k];
      if (!p.finite()) continue;
      s << "<circle cx=\"" << detail::px(vp.sx(p.x)) << "\" cy=\"" << detail::px(vp.sy(p.y))
        << "\" r=\"" << detail::px(label == PointLabel::Curve ? opt.point_radius * 1.6
                                                               : opt.point_radius)
        << "\"/>\n";
    }
    s << "</g>\n";
  }
  for (const auto& c : curves) {
    const auto segs = detail::contour_segments(
        [&](double x, double y) { return eval_curve(fam, c.lambda, ImagePoint{x, y}); }, view,
        opt.resolution);
    s << "<path fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\"";
    if (c.dashed) s << " stroke-dasharray=\"6 4\"";
    s << " d=\"";
    for (const auto& g : segs)
      s << 'M' << detail::px(vp.sx(g[0])) << ' ' << detail::px(vp.sy(g[1])) << 'L'
        << detail::px(vp.sx(g[2])) << ' ' << detail::px(vp.sy(g[3]));
    s << "\"/>\n";
  }
  s << "</g>\n";
  detail::svg_axes(s, vp, "x", "y");
  s << "</svg>\n";
  out << s.str();
}

/// Recognized curves of a run summary, least frequent first; pairs below the
/// lowest bucket are left out.
inline std::vector<SvgCurve> bucket_curves(const RunSummary& summary) {
  std::vector<SvgCurve> out;
  for (auto it = summary.pairs.rbegin(); it != summary.pairs.rend(); ++it)
    if (it->bucket != Bucket::None) out.push_back({it->center, bucket_color(it->bucket), false});
  return out;
}

/// Accumulator heatmap, max-pooled to at most `max_cells` per axis. A runs
/// left to right, B bottom to top; darker means more votes.
inline void render_accumulator_svg(std::ostream& out, const AccumulatorGrid& grid,
                                   const std::vector<std::string>& names = {"A", "B"},
                                   int max_cells = 200, const SvgOptions& opt = {}) {
  const auto& g = grid.spec();
  const int pa = (g.n_a + max_cells - 1) / max_cells, pb = (g.n_b + max_cells - 1) / max_cells;
  const int na = (g.n_a + pa - 1) / pa, nb = (g.n_b + pb - 1) / pb;
  std::vector<std::uint32_t> pooled(static_cast<std::size_t>(na) * nb, 0u);
  std::uint32_t peak = 0;
  for (int i = 0; i < g.n_a; ++i)
    for (int j = 0; j < g.n_b; ++j) {
      auto& cell = pooled[static_cast<std::size_t>(i / pa) * nb + j / pb];
      cell = std::max(cell, grid.at(i, j));
      peak = std::max(peak, cell);
    }
  const Window w({g.a_min - 0.5 * g.delta_a, g.a_min + (g.n_a - 0.5) * g.delta_a},
                 {g.b_min - 0.5 * g.delta_b, g.b_min + (g.n_b - 0.5) * g.delta_b});
  const detail::Viewport vp{w, opt};
  const double cw = static_cast<double>(opt.size) / na, ch = static_cast<double>(opt.size) / nb;
  std::ostringstream s;
  detail::svg_open(s, opt);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      const auto v = pooled[static_cast<std::size_t>(i) * nb + j];
      if (v == 0) continue;
      const int shade = 255 - static_cast<int>(std::lround(255.0 * v / peak));
      s << "<rect x=\"" << detail::px(opt.margin + i * cw) << "\" y=\""
        << detail::px(opt.margin + opt.size - (j + 1) * ch) << "\" width=\"" << detail::px(cw)
        << "\" height=\"" << detail::px(ch) << "\" fill=\"rgb(" << shade << ',' << shade << ','
        << shade << ")\"/>\n";
    }
  detail::svg_axes(s, vp, names.size() > 0 ? names[0] : "A", names.size() > 1 ? names[1] : "B");
  s << "</svg>\n";
  out << s.str();
}

}  // namespace hough
