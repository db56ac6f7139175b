#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hough/errors.hpp"
#include "hough/family.hpp"
#include "hough/ht_matrix.hpp"

namespace hough {

/// Discretization of a 2-parameter region. Cell (i, j) is centered on the
/// grid node (a_min + i delta_a, b_min + j delta_b) and covers the half-open
/// box of side delta around it.
struct GridSpec {
  double a_min = 0, a_max = 0, delta_a = 0;
  double b_min = 0, b_max = 0, delta_b = 0;
  int n_a = 0, n_b = 0;

  [[nodiscard]] double a_center(int i) const { return a_min + i * delta_a; }
  [[nodiscard]] double b_center(int j) const { return b_min + j * delta_b; }
  [[nodiscard]] std::size_t cells() const { return static_cast<std::size_t>(n_a) * n_b; }

  /// Unclamped cell coordinate of a value.
  [[nodiscard]] long a_index(double a) const {
    return static_cast<long>(std::floor((a - a_min) / delta_a + 0.5));
  }
  [[nodiscard]] long b_index(double b) const {
    return static_cast<long>(std::floor((b - b_min) / delta_b + 0.5));
  }

  [[nodiscard]] std::optional<std::pair<int, int>> cell_of(const ParamPoint& lambda) const {
    if (lambda.size() != 2) throw argument_error("grid cells need a 2-parameter point");
    const long i = a_index(lambda[0]), j = b_index(lambda[1]);
    if (i < 0 || i >= n_a || j < 0 || j >= n_b) return std::nullopt;
    return std::make_pair(static_cast<int>(i), static_cast<int>(j));
  }

  [[nodiscard]] ParamPoint center(int i, int j) const { return {a_center(i), b_center(j)}; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

namespace detail {

inline int cell_count(double lo, double hi, double delta) {
  return static_cast<int>(std::floor((hi - lo) / delta + 1e-9));
}

}  // namespace detail

inline GridSpec build_grid(double a_min, double a_max, double delta_a, double b_min, double b_max,
                           double delta_b) {
  for (double v : {a_min, a_max, delta_a, b_min, b_max, delta_b})
    if (!std::isfinite(v)) throw argument_error("grid bounds must be finite");
  if (!(delta_a > 0) || !(delta_b > 0)) throw argument_error("grid steps must be positive");
  if (!(a_max > a_min) || !(b_max > b_min)) throw argument_error("grid needs max > min");
  GridSpec g{a_min, a_max, delta_a, b_min, b_max, delta_b, 0, 0};
  g.n_a = detail::cell_count(a_min, a_max, delta_a);
  g.n_b = detail::cell_count(b_min, b_max, delta_b);
  if (g.n_a < 1 || g.n_b < 1) throw argument_error("grid step exceeds the parameter range");
  return g;
}

inline GridSpec build_grid(const GridAxis& a, const GridAxis& b) {
  return build_grid(a.min, a.max, a.delta, b.min, b.max, b.delta);
}

/// Grid from the family's default region; the family must have t = 2.
inline GridSpec build_grid(const FamilyDefinition& fam) {
  if (fam.t() != 2)
    throw unsupported_dimension_error("accumulator grids need t = 2, family '" + fam.name() +
                                      "' has t = " + std::to_string(fam.t()));
  if (fam.param_region().size() != 2)
    throw argument_error("family '" + fam.name() + "' has no default grid");
  return build_grid(fam.param_region()[0], fam.param_region()[1]);
}

class AccumulatorGrid {
 public:
  explicit AccumulatorGrid(GridSpec spec) : spec_(spec), counts_(spec.cells(), 0u) {}

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] std::uint32_t at(int i, int j) const { return counts_[index(i, j)]; }
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * spec_.n_b + j;
  }
  [[nodiscard]] const std::vector<std::uint32_t>& counts() const { return counts_; }
  std::vector<std::uint32_t>& counts() { return counts_; }

  void clear() { std::fill(counts_.begin(), counts_.end(), 0u); }

  AccumulatorGrid& operator+=(const AccumulatorGrid& other) {
    if (!(other.spec_ == spec_)) throw argument_error("cannot merge grids with different specs");
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
    return *this;
  }

  friend bool operator==(const AccumulatorGrid& a, const AccumulatorGrid& b) {
    return a.spec_ == b.spec_ && a.counts_ == b.counts_;
  }

 private:
  GridSpec spec_;
  std::vector<std::uint32_t> counts_;
};

/// How a transform curve Gamma_p is rasterized.
///   ColumnCenter: the cell holding B(a_i) at every column center a_i.
///   CrossingFill: every cell whose box the curve B(A) meets, using the exact
///                 B-range over each column.
enum class VoteMode { ColumnCenter, CrossingFill };

inline const char* vote_mode_name(VoteMode m) {
  return m == VoteMode::ColumnCenter ? "column" : "crossing";
}

inline VoteMode parse_vote_mode(const std::string& s) {
  if (s == "column") return VoteMode::ColumnCenter;
  if (s == "crossing") return VoteMode::CrossingFill;
  throw argument_error("unknown vote mode '" + s + "' (expected column or crossing)");
}

inline constexpr VoteMode kDefaultVoteMode = VoteMode::ColumnCenter;

namespace detail {

/// Dense univariate polynomial, coefficient k multiplies x^k.
using UPoly = std::vector<double>;

inline void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
}

inline double horner(const UPoly& p, double x) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline UPoly derivative(const UPoly& p) {
  UPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<double>(k));
  trim(d);
  return d;
}

inline UPoly multiply(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

inline UPoly subtract(UPoly a, const UPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
  trim(a);
  return a;
}

/// Real roots of p in [lo, hi], found by splitting at the roots of p' (so p is
/// monotone on each piece) and bisecting pieces with a sign change.
inline std::vector<double> real_roots(const UPoly& p, double lo, double hi) {
  std::vector<double> out;
  if (p.size() <= 1) return out;
  if (p.size() == 2) {
    const double r = -p[0] / p[1];
    if (r >= lo && r <= hi) out.push_back(r);
    return out;
  }
  std::vector<double> cuts{lo};
  for (double c : real_roots(derivative(p), lo, hi)) cuts.push_back(c);
  cuts.push_back(hi);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k], b = cuts[k + 1];
    double fa = horner(p, a), fb = horner(p, b);
    if (fa == 0.0) {
      if (out.empty() || out.back() != a) out.push_back(a);
      continue;
    }
    if (fb == 0.0 || (fa < 0) == (fb < 0)) continue;
    for (int it = 0; it < 200 && b - a > 0; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      const double fm = horner(p, m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    out.push_back(0.5 * (a + b));
  }
  if (horner(p, hi) == 0.0 && (out.empty() || out.back() != hi)) out.push_back(hi);
  return out;
}

}  // namespace detail

/// Gamma_p for a t = 2 family, in the form Q(A) + B R(A) = 0 when the family
/// is linear in B, or as the raw coefficient list otherwise.
struct CompiledTransform {
  bool degenerate = false;
  bool linear_in_b = false;
  detail::UPoly q, r;                                // linear case
  std::vector<std::pair<MonomialExp, double>> raw;   // general case

  [[nodiscard]] double eval(double a, double b) const {
    if (linear_in_b) return detail::horner(q, a) + b * detail::horner(r, a);
    double acc = 0.0;
    for (const auto& [m, c] : raw) acc += c * std::pow(a, m[0]) * std::pow(b, m[1]);
    return acc;
  }
};

inline CompiledTransform compile_transform(const FamilyDefinition& fam, const ImagePoint& p) {
  if (fam.t() != 2)
    throw unsupported_dimension_error("voting needs t = 2, family '" + fam.name() + "' has t = " +
                                      std::to_string(fam.t()));
  if (!p.finite()) throw argument_error("non-finite image point");
  CompiledTransform out;
  bool linear = true;
  for (const auto& term : fam.terms())
    if (term.mono[1] > 1) linear = false;
  out.linear_in_b = linear;
  bool any = false;
  for (const auto& term : fam.terms()) {
    const double c = term.poly.eval(p.x, p.y);
    if (c == 0.0) continue;
    any = true;
    if (linear) {
      auto& target = term.mono[1] == 0 ? out.q : out.r;
      const auto k = static_cast<std::size_t>(term.mono[0]);
      if (target.size() <= k) target.resize(k + 1, 0.0);
      target[k] += c;
    } else {
      out.raw.emplace_back(term.mono, c);
    }
  }
  detail::trim(out.q);
  detail::trim(out.r);
  out.degenerate = !any;
  return out;
}

namespace detail {

/// Marks cell (i, j) at most once per point via a stamp buffer.
class CellMarker {
 public:
  CellMarker(AccumulatorGrid& grid, std::vector<std::uint32_t>* stamp, std::uint32_t token)
      : grid_(grid), stamp_(stamp), token_(token) {}

  std::size_t marked() const { return marked_; }

  void mark(int i, int j) {
    const std::size_t k = grid_.index(i, j);
    if (stamp_) {
      if ((*stamp_)[k] == token_) return;
      (*stamp_)[k] = token_;
    }
    ++grid_.counts()[k];
    ++marked_;
  }

  void mark_span(int i, long j0, long j1, int n_b) {
    if (j0 > j1) std::swap(j0, j1);
    j0 = std::max(j0, 0L);
    j1 = std::min(j1, static_cast<long>(n_b) - 1);
    for (long j = j0; j <= j1; ++j) mark(i, static_cast<int>(j));
  }

 private:
  AccumulatorGrid& grid_;
  std::vector<std::uint32_t>* stamp_;
  std::uint32_t token_;
  std::size_t marked_ = 0;
};

inline void vote_vertical_lines(const CompiledTransform& tr, const GridSpec& g, CellMarker& out) {
  const double lo = g.a_center(0) - 0.5 * g.delta_a;
  const double hi = g.a_center(g.n_a - 1) + 0.5 * g.delta_a;
  std::vector<int> cols;
  for (double root : real_roots(tr.q, lo, hi)) {
    const long i = std::clamp(g.a_index(root), 0L, static_cast<long>(g.n_a) - 1);
    if (cols.empty() || cols.back() != i) cols.push_back(static_cast<int>(i));
  }
  for (int i : cols) out.mark_span(i, 0, g.n_b - 1, g.n_b);
}

inline void vote_column_center(const CompiledTransform& tr, const GridSpec& g, CellMarker& out) {
  const bool constant_r = tr.r.size() == 1;
  const double r0 = constant_r ? tr.r[0] : 0.0;
  for (int i = 0; i < g.n_a; ++i) {
    const double a = g.a_center(i);
    const double r = constant_r ? r0 : horner(tr.r, a);
    if (r == 0.0) continue;
    const double b = -horner(tr.q, a) / r;
    if (!std::isfinite(b)) continue;
    const long j = g.b_index(b);
    if (j >= 0 && j < g.n_b) out.mark(i, static_cast<int>(j));
  }
}

inline void vote_crossing(const CompiledTransform& tr, const GridSpec& g, CellMarker& out) {
  const double lo = g.a_center(0) - 0.5 * g.delta_a;
  const double hi = g.a_center(g.n_a - 1) + 0.5 * g.delta_a;
  const auto poles = real_roots(tr.r, lo, hi);
  // Critical points of B(A) = -Q/R are roots of Q'R - QR'.
  const UPoly w = subtract(multiply(derivative(tr.q), tr.r), multiply(tr.q, derivative(tr.r)));
  const auto crit = real_roots(w, lo, hi);
  auto bval = [&](double a) { return -horner(tr.q, a) / horner(tr.r, a); };
  std::size_t pole_k = 0, crit_k = 0;
  for (int i = 0; i < g.n_a; ++i) {
    const double c0 = g.a_center(i) - 0.5 * g.delta_a;
    const double c1 = c0 + g.delta_a;
    while (pole_k < poles.size() && poles[pole_k] < c0) ++pole_k;
    if (pole_k < poles.size() && poles[pole_k] <= c1) {
      out.mark_span(i, 0, g.n_b - 1, g.n_b);
      continue;
    }
    double bmin = bval(c0), bmax = bmin;
    const double b1 = bval(c1);
    bmin = std::min(bmin, b1);
    bmax = std::max(bmax, b1);
    while (crit_k < crit.size() && crit[crit_k] < c0) ++crit_k;
    for (std::size_t k = crit_k; k < crit.size() && crit[k] <= c1; ++k) {
      const double v = bval(crit[k]);
      bmin = std::min(bmin, v);
      bmax = std::max(bmax, v);
    }
    if (!std::isfinite(bmin) || !std::isfinite(bmax)) continue;
    const long j0 = g.b_index(bmin), j1 = g.b_index(bmax);
    if (j1 < 0 || j0 >= g.n_b) continue;
    out.mark_span(i, j0, j1, g.n_b);
  }
}

/// Families not linear in B: a cell is crossed when f_p changes sign (or
/// vanishes) among its four corners.
inline void vote_corner_signs(const CompiledTransform& tr, const GridSpec& g, CellMarker& out) {
  std::vector<int> prev(g.n_b + 1), cur(g.n_b + 1);
  auto sgn = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  auto fill = [&](std::vector<int>& row, int i) {
    const double a = g.a_center(0) + (i - 0.5) * g.delta_a;
    for (int j = 0; j <= g.n_b; ++j)
      row[j] = sgn(tr.eval(a, g.b_center(0) + (j - 0.5) * g.delta_b));
  };
  fill(prev, 0);
  for (int i = 0; i < g.n_a; ++i) {
    fill(cur, i + 1);
    for (int j = 0; j < g.n_b; ++j) {
      const int s[4] = {prev[j], prev[j + 1], cur[j], cur[j + 1]};
      bool zero = false, pos = false, neg = false;
      for (int v : s) {
        zero |= v == 0;
        pos |= v > 0;
        neg |= v < 0;
      }
      if (zero || (pos && neg)) out.mark(i, j);
    }
    std::swap(prev, cur);
  }
}

inline std::size_t vote_into(AccumulatorGrid& grid, const CompiledTransform& tr, VoteMode mode,
                             std::vector<std::uint32_t>* stamp, std::uint32_t token) {
  CellMarker marker(grid, stamp, token);
  const GridSpec& g = grid.spec();
  if (!tr.linear_in_b) {
    vote_corner_signs(tr, g, marker);
  } else if (tr.r.empty()) {
    vote_vertical_lines(tr, g, marker);
  } else if (mode == VoteMode::ColumnCenter) {
    vote_column_center(tr, g, marker);
  } else {
    vote_crossing(tr, g, marker);
  }
  return marker.marked();
}

inline bool needs_stamp(const CompiledTransform& tr, VoteMode mode) {
  // Column-center voting touches each column once; the other rasterizers may
  // revisit a cell (adjacent spans, vertical lines in one column).
  return !(tr.linear_in_b && !tr.r.empty() && mode == VoteMode::ColumnCenter);
}

}  // namespace detail

/// Outcome of voting a single point.
struct VoteResult {
  std::size_t cells = 0;    // cells incremented
  bool degenerate = false;  // all Hough coefficients vanished; no votes cast
};

/// Adds the votes of Gamma_p to the grid, at most one per cell.
inline VoteResult vote(AccumulatorGrid& grid, const FamilyDefinition& fam, const ImagePoint& p,
                       VoteMode mode = kDefaultVoteMode) {
  const auto tr = compile_transform(fam, p);
  if (tr.degenerate) return {0, true};
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t>* sp = nullptr;
  if (detail::needs_stamp(tr, mode)) {
    stamp.assign(grid.counts().size(), 0u);
    sp = &stamp;
  }
  return {detail::vote_into(grid, tr, mode, sp, 1u), false};
}

struct AccumulateStats {
  std::size_t points = 0;
  std::size_t degenerate_skipped = 0;
};

struct AccumulateOptions {
  VoteMode mode = kDefaultVoteMode;
  unsigned threads = 1;
};

/// Votes every point into `grid`. Points are sharded across `threads`
/// private grids merged by addition, so the result is independent of the
/// thread count and of point order.
inline AccumulateStats accumulate(AccumulatorGrid& grid, const FamilyDefinition& fam,
                                  const std::vector<ImagePoint>& points,
                                  AccumulateOptions opt = {}) {
  if (fam.t() != 2)
    throw unsupported_dimension_error("voting needs t = 2, family '" + fam.name() + "' has t = " +
                                      std::to_string(fam.t()));
  AccumulateStats stats;
  stats.points = points.size();
  const unsigned threads =
      std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(points.size())));

  auto run_shard = [&](AccumulatorGrid& target, std::size_t begin, std::size_t end,
                       std::size_t& skipped) {
    std::vector<std::uint32_t> stamp;
    std::uint32_t token = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const auto tr = compile_transform(fam, points[k]);
      if (tr.degenerate) {
        ++skipped;
        continue;
      }
      std::vector<std::uint32_t>* sp = nullptr;
      if (detail::needs_stamp(tr, opt.mode)) {
        if (stamp.empty()) stamp.assign(target.counts().size(), 0u);
        sp = &stamp;
      }
      detail::vote_into(target, tr, opt.mode, sp, ++token);
    }
  };

  if (threads == 1) {
    run_shard(grid, 0, points.size(), stats.degenerate_skipped);
    return stats;
  }
  std::vector<AccumulatorGrid> shards(threads, AccumulatorGrid(grid.spec()));
  std::vector<std::size_t> skipped(threads, 0);
  std::vector<std::thread> workers;
  const std::size_t chunk = (points.size() + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = std::min(points.size(), w * chunk);
    const std::size_t end = std::min(points.size(), begin + chunk);
    workers.emplace_back([&, w, begin, end] { run_shard(shards[w], begin, end, skipped[w]); });
  }
  for (auto& t : workers) t.join();
  for (unsigned w = 0; w < threads; ++w) {
    grid += shards[w];
    stats.degenerate_skipped += skipped[w];
  }
  return stats;
}

struct ArgmaxResult {
  int i = 0;
  int j = 0;
  ParamPoint center;
  std::uint32_t count = 0;
};

/// Maximal cell; ties go to the smallest row-major index i * n_b + j.
inline ArgmaxResult argmax(const AccumulatorGrid& grid) {
  const auto& c = grid.counts();
  if (c.empty()) throw argument_error("empty accumulator grid");
  const auto it = std::max_element(c.begin(), c.end());
  if (*it == 0) throw no_signal_error("accumulator received no votes");
  const auto k = static_cast<std::size_t>(it - c.begin());
  ArgmaxResult r;
  r.i = static_cast<int>(k / grid.spec().n_b);
  r.j = static_cast<int>(k % grid.spec().n_b);
  r.center = grid.spec().center(r.i, r.j);
  r.count = *it;
  return r;
}

/// N_a lines of N_b comma-separated counts (row i is the A index).
inline void write_accumulator_csv(std::ostream& out, const AccumulatorGrid& grid) {
  const auto& g = grid.spec();
  std::string line;
  for (int i = 0; i < g.n_a; ++i) {
    line.clear();
    for (int j = 0; j < g.n_b; ++j) {
      if (j) line += ',';
      line += std::to_string(grid.at(i, j));
    }
    line += '\n';
    out << line;
  }
}

}  // namespace hough
