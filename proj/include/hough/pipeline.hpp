#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hough/accumulator.hpp"
#include "hough/errors.hpp"
#include "hough/family.hpp"
#include "hough/ht_matrix.hpp"
#include "hough/linalg.hpp"

namespace hough {

struct RecognitionOutcome {
  ParamPoint estimate;                              // center of the winning cell
  std::pair<int, int> cell{0, 0};
  std::uint32_t votes = 0;
  std::optional<std::pair<int, int>> true_cell;     // cell containing the ground truth
  bool exact = false;
  double distance = 0.0;                            // 0 when exact
  std::size_t degenerate_skipped = 0;
};

/// Scores an argmax against ground truth: exact iff the winning cell is the
/// cell containing `truth`; distance from the winning center otherwise.
inline void score_against(RecognitionOutcome& out, const GridSpec& grid, const ParamPoint& truth) {
  out.true_cell = grid.cell_of(truth);
  out.exact = out.true_cell && *out.true_cell == out.cell;
  if (out.exact) {
    out.distance = 0.0;
  } else {
    double acc = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      const double d = out.estimate[k] - truth[k];
      acc += d * d;
    }
    out.distance = std::sqrt(acc);
  }
}

/// Votes all points, takes the argmax and, given ground truth, scores it.
/// Throws no_signal_error when no cell received a vote.
inline RecognitionOutcome recognize(const FamilyDefinition& fam,
                                    const std::vector<ImagePoint>& points, const GridSpec& grid,
                                    const std::optional<ParamPoint>& truth = std::nullopt,
                                    AccumulateOptions opt = {},
                                    AccumulatorGrid* keep = nullptr) {
  if (fam.t() != 2)
    throw unsupported_dimension_error("recognition needs t = 2, family '" + fam.name() +
                                      "' has t = " + std::to_string(fam.t()));
  AccumulatorGrid acc(grid);
  const auto stats = accumulate(acc, fam, points, opt);
  const auto best = argmax(acc);
  RecognitionOutcome out;
  out.estimate = best.center;
  out.cell = {best.i, best.j};
  out.votes = best.count;
  out.degenerate_skipped = stats.degenerate_skipped;
  if (truth) score_against(out, grid, *truth);
  if (keep) *keep = std::move(acc);
  return out;
}

template <typename T>
using LinearSolveResult = LinearSystemSolution<T>;

namespace detail {

template <typename Point>
auto linsolve_impl(const FamilyDefinition& fam, const std::vector<Point>& points) {
  using T = scalar_for_t<Point>;
  if (!fam.linear_in_parameters())
    throw argument_error("family '" + fam.name() + "' is not linear in its parameters");
  if (points.empty()) throw argument_error("linear solve needs at least one point");
  Matrix<T> a;
  std::vector<T> b;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto hp = hough_poly_at(fam, points[k], k);
    std::vector<T> row(static_cast<std::size_t>(fam.t()), T(0));
    T rhs = T(0);
    for (const auto& [mono, c] : hp.coeffs) {
      if (mono.total_degree() == 0) {
        rhs = -c;
        continue;
      }
      for (int v = 0; v < fam.t(); ++v)
        if (mono[v] == 1) row[v] = c;
    }
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
  }
  return solve_linear_system(a, b);
}

}  // namespace detail

/// One linear equation per point from its Hough polynomial, solved exactly.
inline LinearSolveResult<Rational> linsolve_exact(const FamilyDefinition& fam,
                                                  const std::vector<ExactPoint>& points) {
  return detail::linsolve_impl(fam, points);
}

/// Floating-point variant (pivot threshold 1e-9 relative).
inline LinearSolveResult<double> linsolve_exact(const FamilyDefinition& fam,
                                                const std::vector<ImagePoint>& points) {
  return detail::linsolve_impl(fam, points);
}

inline const char* solve_kind_name(LinearSystemSolution<Rational>::Kind k) {
  switch (k) {
    case LinearSystemSolution<Rational>::Kind::Unique:
      return "unique";
    case LinearSystemSolution<Rational>::Kind::Underdetermined:
      return "underdetermined";
    default:
      return "inconsistent";
  }
}

/// Repetition-rate color classes for recognized curves, by percentage of runs.
enum class Bucket { None, Cyan, Green, Yellow, Orange, Red, Magenta };

inline const char* bucket_name(Bucket b) {
  switch (b) {
    case Bucket::Cyan:
      return "cyan";
    case Bucket::Green:
      return "green";
    case Bucket::Yellow:
      return "yellow";
    case Bucket::Orange:
      return "orange";
    case Bucket::Red:
      return "red";
    case Bucket::Magenta:
      return "magenta";
    default:
      return "none";
  }
}

/// Bucket of `count` occurrences out of `runs`, compared exactly in integers:
/// cyan (2,3], green (3,5], yellow (5,10], orange (10,20], red (20,50],
/// magenta (50,100] percent.
inline Bucket bucket_for(std::size_t count, std::size_t runs) {
  const auto pct100 = count * 100;  // compare count/runs*100 > p as count*100 > p*runs
  auto above = [&](std::size_t p) { return pct100 > p * runs; };
  if (above(50)) return Bucket::Magenta;
  if (above(20)) return Bucket::Red;
  if (above(10)) return Bucket::Orange;
  if (above(5)) return Bucket::Yellow;
  if (above(3)) return Bucket::Green;
  if (above(2)) return Bucket::Cyan;
  return Bucket::None;
}

struct RecognizedPair {
  std::pair<int, int> cell;
  ParamPoint center;
  std::size_t count = 0;
  double rate_percent = 0.0;
  Bucket bucket = Bucket::None;
};

struct RunSummary {
  std::size_t runs = 0;
  std::size_t exact = 0;
  double exact_rate = 0.0;  // percent
  double mean_distance = 0.0;
  double std_distance = 0.0;  // population standard deviation
  std::vector<RecognizedPair> pairs;  // most frequent first
};

inline RunSummary score_runs(const std::vector<RecognitionOutcome>& outcomes) {
  if (outcomes.empty()) throw argument_error("score_runs needs at least one outcome");
  RunSummary s;
  s.runs = outcomes.size();
  double sum = 0.0;
  std::map<std::pair<int, int>, RecognizedPair> by_cell;
  for (const auto& o : outcomes) {
    if (o.exact) ++s.exact;
    sum += o.distance;
    auto& p = by_cell[o.cell];
    p.cell = o.cell;
    p.center = o.estimate;
    ++p.count;
  }
  const double n = static_cast<double>(s.runs);
  s.exact_rate = 100.0 * static_cast<double>(s.exact) / n;
  s.mean_distance = sum / n;
  double var = 0.0;
  for (const auto& o : outcomes) var += (o.distance - s.mean_distance) * (o.distance - s.mean_distance);
  s.std_distance = std::sqrt(var / n);
  for (auto& [cell, p] : by_cell) {
    p.rate_percent = 100.0 * static_cast<double>(p.count) / n;
    p.bucket = bucket_for(p.count, s.runs);
    s.pairs.push_back(p);
  }
  std::stable_sort(s.pairs.begin(), s.pairs.end(),
                   [](const RecognizedPair& a, const RecognizedPair& b) { return a.count > b.count; });
  return s;
}

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace detail

inline void write_outcome_csv_header(std::ostream& out) {
  out << "a,b,i,j,votes,exact,distance,degenerate_skipped\n";
}

inline void write_outcome_csv_row(std::ostream& out, const RecognitionOutcome& o) {
  out << detail::fmt_double(o.estimate[0]) << ',' << detail::fmt_double(o.estimate[1]) << ','
      << o.cell.first << ',' << o.cell.second << ',' << o.votes << ',' << (o.exact ? 1 : 0) << ','
      << detail::fmt_double(o.distance) << ',' << o.degenerate_skipped << '\n';
}

}  // namespace hough
