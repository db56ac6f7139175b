#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hough/errors.hpp"
#include "hough/geometry.hpp"
#include "hough/polynomial.hpp"
#include "hough/projective.hpp"
#include "hough/rational.hpp"

namespace hough {

/// One summand BivarPoly(x, y) * Lambda^mono of the family equation.
struct FamilyTerm {
  MonomialExp mono;
  BivarPoly poly;
};

/// Discretization defaults for one parameter axis.
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  double delta = 0.0;
  friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

/// Where on-curve points are drawn. `sampler` selects the family-specific
/// strategy; `range` is its scan/parameter interval; `bbox`, when set, clips
/// samples and is the default background-noise window.
struct SamplingWindow {
  std::string sampler = "scan";
  Interval range{};
  std::optional<Window> bbox;
  friend bool operator==(const SamplingWindow&, const SamplingWindow&) = default;
};

/// Plain aggregate used to construct a FamilyDefinition.
struct FamilyData {
  std::string name;
  int t = 0;
  int d = 0;
  std::vector<FamilyTerm> terms;
  std::vector<ComplexProjectivePoint> base_points;
  std::vector<GridAxis> param_region;
  SamplingWindow window;
  bool solve_for_last = false;
  std::optional<ParamPoint> reference_params;
  std::vector<std::string> param_names;
};

/// A parameter family of plane curves f_lambda(x, y) = sum poly_k(x, y) lambda^m_k.
/// Immutable after construction; the constructor enforces the structural
/// invariants.
class FamilyDefinition {
 public:
  explicit FamilyDefinition(FamilyData data) : data_(std::move(data)) {
    if (data_.t < 1) throw argument_error("family must have at least one parameter");
    if (data_.d < 1) throw argument_error("family curve degree must be positive");
    if (data_.terms.empty()) throw argument_error("family '" + data_.name + "' has no terms");
    std::set<MonomialExp> seen;
    bool attains_degree = false;
    for (const auto& term : data_.terms) {
      if (static_cast<int>(term.mono.size()) != data_.t)
        throw argument_error("monomial length differs from parameter count");
      if (!seen.insert(term.mono).second)
        throw argument_error("duplicate parameter monomial in family '" + data_.name + "'");
      if (term.poly.degree() > data_.d)
        throw argument_error("coefficient polynomial exceeds curve degree");
      if (term.poly.degree() == data_.d) attains_degree = true;
    }
    if (!attains_degree)
      throw argument_error("no coefficient polynomial attains the curve degree");
    for (std::size_t a = 0; a < data_.base_points.size(); ++a)
      for (std::size_t b = a + 1; b < data_.base_points.size(); ++b)
        if (data_.base_points[a] == data_.base_points[b])
          throw argument_error("base points must be pairwise distinct");
    if (!data_.param_region.empty() && static_cast<int>(data_.param_region.size()) != data_.t)
      throw argument_error("param_region must have one axis per parameter");
    if (data_.param_names.empty()) data_.param_names = default_param_names(data_.t);
    if (static_cast<int>(data_.param_names.size()) != data_.t)
      throw argument_error("param_names must have one name per parameter");
    if (data_.reference_params && static_cast<int>(data_.reference_params->size()) != data_.t)
      throw argument_error("reference_params has wrong length");
    if (data_.solve_for_last) {
      for (const auto& term : data_.terms)
        if (term.mono[data_.t - 1] > 1)
          throw argument_error("solve_for_last requires the last parameter to occur linearly");
    }
  }

  [[nodiscard]] const std::string& name() const { return data_.name; }
  [[nodiscard]] int t() const { return data_.t; }
  [[nodiscard]] int d() const { return data_.d; }
  [[nodiscard]] const std::vector<FamilyTerm>& terms() const { return data_.terms; }
  [[nodiscard]] const std::vector<ComplexProjectivePoint>& base_points() const {
    return data_.base_points;
  }
  [[nodiscard]] const std::vector<GridAxis>& param_region() const { return data_.param_region; }
  [[nodiscard]] const SamplingWindow& window() const { return data_.window; }
  [[nodiscard]] bool solve_for_last() const { return data_.solve_for_last; }
  [[nodiscard]] const std::optional<ParamPoint>& reference_params() const {
    return data_.reference_params;
  }
  [[nodiscard]] const std::vector<std::string>& param_names() const { return data_.param_names; }
  [[nodiscard]] const FamilyData& data() const { return data_; }

  [[nodiscard]] std::vector<ComplexProjectivePoint> affine_base_points() const {
    std::vector<ComplexProjectivePoint> out;
    for (const auto& q : data_.base_points)
      if (q.is_affine()) out.push_back(q);
    return out;
  }

  /// True when every parameter enters with total degree <= 1.
  [[nodiscard]] bool linear_in_parameters() const {
    return std::all_of(data_.terms.begin(), data_.terms.end(),
                       [](const FamilyTerm& term) { return term.mono.total_degree() <= 1; });
  }

  static std::vector<std::string> default_param_names(int t) {
    static const char* kNames[] = {"A", "B", "C", "D", "E", "F", "G", "H"};
    std::vector<std::string> out;
    for (int k = 0; k < t; ++k)
      out.push_back(k < 8 ? kNames[k] : "L" + std::to_string(k + 1));
    return out;
  }

 private:
  FamilyData data_;
};

namespace detail {

inline void check_lambda(const FamilyDefinition& fam, std::size_t size) {
  if (static_cast<int>(size) != fam.t())
    throw argument_error("parameter vector has length " + std::to_string(size) +
                         ", family '" + fam.name() + "' expects " + std::to_string(fam.t()));
}

}  // namespace detail

/// f_lambda(p): collects g_ij(lambda) first, then sums x^i y^j g_ij.
inline double eval_curve(const FamilyDefinition& fam, const ParamPoint& lambda,
                         const ImagePoint& p) {
  detail::check_lambda(fam, lambda.size());
  std::map<std::pair<int, int>, double> g;
  for (const auto& term : fam.terms()) {
    const double lm = monomial_value(term.mono, lambda.coords);
    for (const auto& t : term.poly.fast_terms()) g[{t.i, t.j}] += t.coeff * lm;
  }
  double acc = 0.0;
  for (const auto& [ij, c] : g) acc += c * std::pow(p.x, ij.first) * std::pow(p.y, ij.second);
  return acc;
}

inline Rational eval_curve(const FamilyDefinition& fam, const std::vector<Rational>& lambda,
                           const ExactPoint& p) {
  detail::check_lambda(fam, lambda.size());
  std::map<std::pair<int, int>, Rational> g;
  for (const auto& term : fam.terms()) {
    const Rational lm = monomial_value(term.mono, lambda);
    for (const auto& [ij, c] : term.poly.terms()) g[ij] += c * lm;
  }
  Rational acc = 0;
  for (const auto& [ij, c] : g) acc += c * p.x.pow(ij.first) * p.y.pow(ij.second);
  return acc;
}

/// f_p(lambda): evaluates each term polynomial at p first (the Hough side).
inline double eval_hough(const FamilyDefinition& fam, const ImagePoint& p,
                         const ParamPoint& lambda) {
  detail::check_lambda(fam, lambda.size());
  double acc = 0.0;
  for (const auto& term : fam.terms())
    acc += term.poly.eval(p.x, p.y) * monomial_value(term.mono, lambda.coords);
  return acc;
}

inline Rational eval_hough(const FamilyDefinition& fam, const ExactPoint& p,
                           const std::vector<Rational>& lambda) {
  detail::check_lambda(fam, lambda.size());
  Rational acc = 0;
  for (const auto& term : fam.terms())
    acc += term.poly.eval(p.x, p.y) * monomial_value(term.mono, lambda);
  return acc;
}

/// Magnitude sum |poly_k(p)| |lambda^m_k| used to scale residual tolerances.
inline double eval_scale(const FamilyDefinition& fam, const ParamPoint& lambda,
                         const ImagePoint& p) {
  detail::check_lambda(fam, lambda.size());
  double acc = 0.0;
  for (const auto& term : fam.terms())
    acc += term.poly.eval_abs(p.x, p.y) * std::abs(monomial_value(term.mono, lambda.coords));
  return std::max(acc, 1.0);
}

inline constexpr double kBaseTolerance = 1e-9;

/// True iff every term's degree-d homogenization vanishes at q. Exact when q
/// carries Gaussian-rational coordinates, otherwise within
/// kBaseTolerance relative to the coefficient magnitudes at the normalized point.
inline bool verify_base_point(const FamilyDefinition& fam, const ComplexProjectivePoint& q) {
  if (q.has_exact()) {
    const auto& c = *q.exact();
    auto lift = [](const Rational& r) { return GaussianRational(r); };
    for (const auto& term : fam.terms())
      if (!term.poly.eval_homogeneous(c[0], c[1], c[2], fam.d(), lift).is_zero()) return false;
    return true;
  }
  auto raw = q.coords();
  const double norm = std::max({std::abs(raw[0]), std::abs(raw[1]), std::abs(raw[2])});
  std::array<std::complex<double>, 3> c{raw[0] / norm, raw[1] / norm, raw[2] / norm};
  auto lift = [](const Rational& r) { return std::complex<double>(to_double(r), 0.0); };
  for (const auto& term : fam.terms()) {
    double scale = 0.0;
    for (const auto& t : term.poly.fast_terms()) scale += std::abs(t.coeff);
    const auto v = term.poly.eval_homogeneous(c[0], c[1], c[2], fam.d(), lift);
    if (std::abs(v) > kBaseTolerance * std::max(scale, 1.0)) return false;
  }
  return true;
}

/// Geometric bound d^2 - #B(C) + 1.
inline int nu_opt(const FamilyDefinition& fam) {
  return fam.d() * fam.d() - static_cast<int>(fam.base_points().size()) + 1;
}

/// Real points in B_aff have the whole parameter space as Hough transform and
/// must be discarded before voting.
inline bool is_affine_base_point(const FamilyDefinition& fam, const ImagePoint& p) {
  for (const auto& q : fam.base_points()) {
    if (auto xy = q.real_affine()) {
      const double tol = ComplexProjectivePoint::kEqualityTol *
                         std::max({1.0, std::abs(p.x), std::abs(p.y)});
      if (std::abs(xy->first - p.x) <= tol && std::abs(xy->second - p.y) <= tol) return true;
    }
  }
  return false;
}

}  // namespace hough
