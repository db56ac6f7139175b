#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hough/errors.hpp"
#include "hough/family.hpp"
#include "hough/ht_matrix.hpp"
#include "hough/rng.hpp"

namespace hough {

/// Residual bound for accepted on-curve samples, relative to eval_scale.
inline constexpr double kOnCurveTolerance = 1e-9;

namespace detail {

/// Real branch of a curve, parametrized over [lo, hi]; `at` returns nothing
/// where the branch has no real point.
struct Branch {
  std::function<std::optional<ImagePoint>(double)> at;
  double lo = 0.0;
  double hi = 0.0;
};

struct Segment {
  std::size_t branch;
  double s0;
  double s1;
  double cum_end;  // cumulative length up to the end of this segment
};

inline std::optional<ImagePoint> finite_point(double x, double y) {
  ImagePoint p{x, y};
  if (!p.finite()) return std::nullopt;
  return p;
}

inline double signed_pow(double v, double e) {
  const double mag = std::pow(std::abs(v), e);
  return v < 0 ? -mag : mag;
}

inline std::vector<Branch> make_branches(const std::shared_ptr<const FamilyDefinition>& fam,
                                         const ParamPoint& lambda, const SamplingWindow& w) {
  const std::string& kind = w.sampler;
  auto need_two = [&] {
    if (lambda.size() < 2) throw argument_error("sampler '" + kind + "' needs two parameters");
  };
  std::vector<Branch> out;
  if (kind == "folium") {
    // Polar form r = 3a sin cos / (cos^3 + b sin^3), theta in [0, pi), covers
    // the loop and both tails.
    need_two();
    const double a = lambda[0], b = lambda[1];
    out.push_back({[a, b](double th) {
                     const double s = std::sin(th), c = std::cos(th);
                     const double r = 3 * a * s * c / (c * c * c + b * s * s * s);
                     return finite_point(r * c, r * s);
                   },
                   w.range.lo, w.range.hi});
  } else if (kind == "elliptic") {
    // Families y^2 = g(x): g(x) is the curve equation evaluated on y = 0.
    for (int sign : {1, -1}) {
      out.push_back({[fam, lambda, sign](double x) -> std::optional<ImagePoint> {
                       const double g = eval_curve(*fam, lambda, ImagePoint{x, 0.0});
                       if (!(g >= 0.0)) return std::nullopt;
                       return finite_point(x, sign * std::sqrt(g));
                     },
                     w.range.lo, w.range.hi});
    }
  } else if (kind == "polar_triple") {
    need_two();
    const double a = lambda[0], b = lambda[1];
    out.push_back({[a, b](double th) {
                     const double s = std::sin(th), c = std::cos(th);
                     const double u = c - a * s;
                     const double r = s * u * u / b;
                     return finite_point(r * c, r * s);
                   },
                   w.range.lo, w.range.hi});
  } else if (kind == "tacnode") {
    need_two();
    const double a = lambda[0], b = lambda[1];
    // (x-a)^2 y^2 - b x^2 y + x^4 = 0; q/u^2 and x^4/q are the two roots.
    for (int which : {0, 1}) {
      out.push_back({[a, b, which](double x) -> std::optional<ImagePoint> {
                       const double u = x - a;
                       const double disc = b * b - 4.0 * u * u;
                       if (disc < 0.0) return std::nullopt;
                       const double q = 0.5 * x * x * (b + std::copysign(std::sqrt(disc), b));
                       if (q == 0.0) return std::nullopt;
                       return which == 0 ? finite_point(x, q / (u * u))
                                         : finite_point(x, x * x * x * x / q);
                     },
                     w.range.lo, w.range.hi});
    }
  } else if (kind == "lamet") {
    need_two();
    const double a = lambda[0], b = lambda[1];
    const double e = 2.0 / fam->d();
    const double yscale = std::pow(b, 1.0 / fam->d());
    out.push_back({[a, e, yscale](double u) {
                     return finite_point(a * signed_pow(std::cos(u), e),
                                         yscale * signed_pow(std::sin(u), e));
                   },
                   w.range.lo, w.range.hi});
  } else if (kind != "scan") {
    throw argument_error("unknown sampler '" + kind + "'");
  }
  return out;
}

}  // namespace detail

/// Draws on-curve points for one member C_lambda of a family.
///
/// Parametrized samplers ("folium", "elliptic", "polar_triple", "tacnode",
/// "lamet") tabulate their branches and draw by inverse CDF of the tabulated
/// arclength, so points are close to uniform along the curve. The "scan"
/// sampler draws x uniformly and picks one of the real roots in y found by
/// sign changes over seed cells refined by bisection.
class CurveSampler {
 public:
  static constexpr int kTableNodes = 4096;
  static constexpr int kScanCells = 256;
  static constexpr int kBisectionSteps = 80;
  static constexpr int kMaxAttempts = 10000;
  /// Margin added on each side of an unclipped curve's bounding box.
  static constexpr double kExtentPad = 0.05;

  CurveSampler(const FamilyDefinition& fam, ParamPoint lambda)
      : CurveSampler(fam, std::move(lambda), fam.window()) {}

  CurveSampler(const FamilyDefinition& fam, ParamPoint lambda, SamplingWindow window)
      : fam_(std::make_shared<const FamilyDefinition>(fam)),
        lambda_(std::move(lambda)),
        window_(std::move(window)) {
    detail::check_lambda(fam, lambda_.size());
    if (!lambda_.finite()) throw argument_error("non-finite curve parameters");
    if (!(window_.range.hi > window_.range.lo))
      throw argument_error("sampling range must be a non-empty interval");
    generic_h_ = generic_support(fam).h;
    branches_ = detail::make_branches(fam_, lambda_, window_);
    if (branches_.empty())
      build_scan_extent();
    else
      build_table();
  }

  /// One candidate; may lie outside the acceptance region.
  [[nodiscard]] std::optional<ImagePoint> propose(Rng& rng) const {
    if (branches_.empty()) return propose_scan(rng);
    if (segments_.empty()) return std::nullopt;
    const double u = rng.uniform() * segments_.back().cum_end;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), u,
                               [](double v, const detail::Segment& s) { return v < s.cum_end; });
    if (it == segments_.end()) it = std::prev(segments_.end());
    const double start = it == segments_.begin() ? 0.0 : std::prev(it)->cum_end;
    const double len = it->cum_end - start;
    const double f = len > 0 ? std::clamp((u - start) / len, 0.0, 1.0) : 0.5;
    return branches_[it->branch].at(it->s0 + f * (it->s1 - it->s0));
  }

  /// True iff p is inside the clip box, is not an affine base point, has the
  /// generic Hough degree, and satisfies the curve equation to tolerance.
  [[nodiscard]] bool accept(const ImagePoint& p) const {
    if (!p.finite()) return false;
    if (window_.bbox && !window_.bbox->contains(p)) return false;
    if (is_affine_base_point(*fam_, p)) return false;
    try {
      if (hough_poly(*fam_, p).h != generic_h_) return false;
    } catch (const degenerate_point_error&) {
      return false;
    }
    return std::abs(eval_curve(*fam_, lambda_, p)) <=
           kOnCurveTolerance * eval_scale(*fam_, lambda_, p);
  }

  ImagePoint draw(Rng& rng) const {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      auto p = propose(rng);
      if (p && accept(*p)) return *p;
    }
    throw sampling_error("no point of '" + fam_->name() + "' found in the sampling window after " +
                         std::to_string(kMaxAttempts) + " attempts");
  }

  std::vector<ImagePoint> draw(std::size_t n, Rng& rng) const {
    std::vector<ImagePoint> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(draw(rng));
    return out;
  }

  /// Clip box when set, else the padded bounding box of the tabulated curve.
  [[nodiscard]] const std::optional<Window>& extent() const { return extent_; }

 private:
  void build_table() {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    double total = 0.0;
    for (std::size_t b = 0; b < branches_.size(); ++b) {
      const auto& br = branches_[b];
      std::optional<ImagePoint> prev;
      double prev_s = br.lo;
      for (int k = 0; k <= kTableNodes; ++k) {
        const double s = br.lo + (br.hi - br.lo) * k / kTableNodes;
        auto p = br.at(s);
        if (p && window_.bbox && !window_.bbox->contains(*p)) p.reset();
        if (p) {
          xmin = std::min(xmin, p->x);
          xmax = std::max(xmax, p->x);
          ymin = std::min(ymin, p->y);
          ymax = std::max(ymax, p->y);
          if (prev) {
            const double len = std::hypot(p->x - prev->x, p->y - prev->y);
            if (len > 0) {
              total += len;
              segments_.push_back({b, prev_s, s, total});
            }
          }
        }
        prev = p;
        prev_s = s;
      }
    }
    if (window_.bbox) {
      extent_ = window_.bbox;
    } else if (xmax > xmin && ymax > ymin) {
      const double px = kExtentPad * (xmax - xmin), py = kExtentPad * (ymax - ymin);
      extent_ = Window({xmin - px, xmax + px}, {ymin - py, ymax + py});
    }
  }

  [[nodiscard]] Interval scan_y_range() const {
    return window_.bbox ? window_.bbox->y_range : window_.range;
  }

  void build_scan_extent() {
    extent_ = window_.bbox ? *window_.bbox : Window(window_.range, window_.range);
  }

  [[nodiscard]] std::optional<ImagePoint> propose_scan(Rng& rng) const {
    const Interval xr = window_.bbox ? window_.bbox->x_range : window_.range;
    const Interval yr = scan_y_range();
    const double x = rng.uniform(xr.lo, xr.hi);
    auto g = [&](double y) { return eval_curve(*fam_, lambda_, ImagePoint{x, y}); };
    std::vector<double> roots;
    double y0 = yr.lo, g0 = g(y0);
    for (int k = 1; k <= kScanCells; ++k) {
      const double y1 = yr.lo + yr.width() * k / kScanCells;
      const double g1 = g(y1);
      if (g0 == 0.0) {
        roots.push_back(y0);
      } else if ((g0 < 0) != (g1 < 0) && g1 != 0.0) {
        double lo = y0, hi = y1, glo = g0;
        for (int it = 0; it < kBisectionSteps; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = g(mid);
          if (gm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        roots.push_back(0.5 * (lo + hi));
      }
      y0 = y1;
      g0 = g1;
    }
    if (g0 == 0.0) roots.push_back(y0);
    if (roots.empty()) return std::nullopt;
    return ImagePoint{x, roots[rng.below(roots.size())]};
  }

  std::shared_ptr<const FamilyDefinition> fam_;
  ParamPoint lambda_;
  SamplingWindow window_;
  int generic_h_ = 0;
  std::vector<detail::Branch> branches_;
  std::vector<detail::Segment> segments_;
  std::optional<Window> extent_;
};

/// n points on C_lambda drawn with the family's sampling window.
inline std::vector<ImagePoint> sample_on_curve(const FamilyDefinition& fam,
                                               const ParamPoint& lambda, std::size_t n, Rng& rng) {
  if (n < 1) throw argument_error("sample_on_curve needs n >= 1");
  return CurveSampler(fam, lambda).draw(n, rng);
}

/// Background-noise window: the family's clip box, else the bounding box of
/// the sampled branch of C_lambda.
inline Window default_noise_window(const FamilyDefinition& fam, const ParamPoint& lambda) {
  CurveSampler sampler(fam, lambda);
  if (!sampler.extent()) throw sampling_error("curve '" + fam.name() + "' has no sampled extent");
  return *sampler.extent();
}

inline std::vector<ImagePoint> uniform_background(const Window& window, std::size_t n, Rng& rng) {
  std::vector<ImagePoint> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = rng.uniform(window.x_range.lo, window.x_range.hi);
    const double y = rng.uniform(window.y_range.lo, window.y_range.hi);
    out.push_back({x, y});
  }
  return out;
}

inline std::vector<ImagePoint> gaussian_perturb(const std::vector<ImagePoint>& points, double sigma,
                                                Rng& rng) {
  if (!(sigma >= 0.0)) throw argument_error("perturbation sigma must be non-negative");
  if (sigma == 0.0) return points;
  std::vector<ImagePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double dx = rng.normal(0.0, sigma);
    const double dy = rng.normal(0.0, sigma);
    out.push_back({p.x + dx, p.y + dy});
  }
  return out;
}

/// Smallest N2 with N2 / (n1 + N2) >= x / 100.
inline std::size_t background_count(std::size_t n1, double x) {
  if (!(x >= 0.0) || !(x < 100.0))
    throw argument_error("noise percentage must lie in [0, 100)");
  const double exact = static_cast<double>(n1) * x / (100.0 - x);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
}

enum class PointLabel { Curve, Noise };

inline const char* label_name(PointLabel l) { return l == PointLabel::Curve ? "curve" : "noise"; }

/// Point set with per-point provenance, serialized as CSV `x,y,label`.
struct LabeledPoints {
  std::vector<ImagePoint> points;
  std::vector<PointLabel> labels;

  void add(const std::vector<ImagePoint>& pts, PointLabel label) {
    points.insert(points.end(), pts.begin(), pts.end());
    labels.insert(labels.end(), pts.size(), label);
  }
  [[nodiscard]] std::size_t size() const { return points.size(); }
};

inline void write_points_csv(std::ostream& out, const LabeledPoints& set) {
  std::ostringstream s;
  s.precision(17);
  s << "x,y,label\n";
  for (std::size_t k = 0; k < set.size(); ++k)
    s << set.points[k].x << ',' << set.points[k].y << ',' << label_name(set.labels[k]) << '\n';
  out << s.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

/// Rows of a points CSV as raw fields (x, y, label), header optional.
inline std::vector<std::vector<std::string>> read_point_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    auto fields = split_csv_line(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (first && !fields.empty() && fields[0] == "x") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() < 2) throw argument_error("points CSV row needs x and y: '" + line + "'");
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace detail

inline LabeledPoints read_points_csv(std::istream& in) {
  LabeledPoints set;
  for (const auto& row : detail::read_point_rows(in)) {
    ImagePoint p{to_double(parse_rational(row[0])), to_double(parse_rational(row[1]))};
    PointLabel label = PointLabel::Curve;
    if (row.size() >= 3 && !row[2].empty()) {
      if (row[2] == "noise")
        label = PointLabel::Noise;
      else if (row[2] != "curve")
        throw argument_error("unknown point label '" + row[2] + "'");
    }
    set.points.push_back(p);
    set.labels.push_back(label);
  }
  return set;
}

/// Exact reading of the same format: decimal and p/q fields become rationals.
inline std::vector<ExactPoint> read_exact_points_csv(std::istream& in) {
  std::vector<ExactPoint> out;
  for (const auto& row : detail::read_point_rows(in))
    out.emplace_back(parse_rational(row[0]), parse_rational(row[1]));
  return out;
}

}  // namespace hough
