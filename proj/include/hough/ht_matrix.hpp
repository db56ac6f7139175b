#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hough/errors.hpp"
#include "hough/family.hpp"
#include "hough/linalg.hpp"

namespace hough {

/// Polynomial f_p(Lambda) of the Hough transform of a point: the coefficient of
/// each family monomial is that term's BivarPoly evaluated at the point.
template <typename T>
struct HoughPoly {
  std::string owner;
  ImagePoint point;
  std::map<MonomialExp, T> coeffs;  // nonzero coefficients only
  int h = 0;                        // degree of f_p in Lambda
};

namespace detail {

inline double eval_term(const BivarPoly& poly, const ImagePoint& p) { return poly.eval(p.x, p.y); }
inline Rational eval_term(const BivarPoly& poly, const ExactPoint& p) { return poly.eval(p.x, p.y); }
inline ImagePoint approx_point(const ImagePoint& p) { return p; }
inline ImagePoint approx_point(const ExactPoint& p) { return p.approx(); }

template <typename Point>
using scalar_for_t = std::conditional_t<std::is_same_v<Point, ExactPoint>, Rational, double>;

template <typename Point>
auto hough_poly_at(const FamilyDefinition& fam, const Point& p, std::size_t index) {
  using T = scalar_for_t<Point>;
  HoughPoly<T> out;
  out.owner = fam.name();
  out.point = approx_point(p);
  if constexpr (std::is_same_v<Point, ImagePoint>) {
    if (!p.finite()) throw argument_error("non-finite image point");
  }
  int h = -1;
  for (const auto& term : fam.terms()) {
    T c = eval_term(term.poly, p);
    if (c == T(0)) continue;
    h = std::max(h, term.mono.total_degree());
    out.coeffs.emplace(term.mono, std::move(c));
  }
  if (out.coeffs.empty())
    throw degenerate_point_error("point " + std::to_string(index) +
                                     " is an affine base point: its Hough polynomial vanishes",
                                 index);
  out.h = h;
  return out;
}

}  // namespace detail

inline HoughPoly<double> hough_poly(const FamilyDefinition& fam, const ImagePoint& p) {
  return detail::hough_poly_at(fam, p, 0);
}

inline HoughPoly<Rational> hough_poly(const FamilyDefinition& fam, const ExactPoint& p) {
  return detail::hough_poly_at(fam, p, 0);
}

/// Homogenized monomials of the generic transform polynomial, sorted
/// descending in degree-lexicographic order with Lambda_t < ... < Lambda_0.
/// Each entry has length t+1 with the Lambda_0 exponent first.
struct OrderedSupport {
  int h = 0;
  std::vector<std::vector<int>> monomials;

  [[nodiscard]] std::size_t s() const { return monomials.size(); }

  [[nodiscard]] std::string column_name(std::size_t k,
                                        const std::vector<std::string>& param_names) const {
    std::string out;
    const auto& m = monomials.at(k);
    // Parameters first, homogenizing variable last: "B*L0", "A^4*L0".
    for (std::size_t step = 0; step < m.size(); ++step) {
      const std::size_t v = (step + 1) % m.size();
      if (m[v] == 0) continue;
      if (!out.empty()) out += "*";
      out += v == 0 ? std::string("L0") : param_names.at(v - 1);
      if (m[v] > 1) out += "^" + std::to_string(m[v]);
    }
    return out.empty() ? "1" : out;
  }
};

inline OrderedSupport generic_support(const FamilyDefinition& fam) {
  OrderedSupport out;
  int h = -1;
  for (const auto& term : fam.terms())
    if (!term.poly.is_zero()) h = std::max(h, term.mono.total_degree());
  if (h < 0) throw argument_error("family '" + fam.name() + "' has no nonzero terms");
  out.h = h;
  for (const auto& term : fam.terms()) {
    if (term.poly.is_zero()) continue;
    std::vector<int> hom;
    hom.push_back(h - term.mono.total_degree());
    hom.insert(hom.end(), term.mono.exponents.begin(), term.mono.exponents.end());
    out.monomials.push_back(std::move(hom));
  }
  std::sort(out.monomials.begin(), out.monomials.end(), std::greater<>());
  return out;
}

/// nu x s matrix whose row j lists the coefficients of f_{p_j}^hom in support order.
template <typename T>
struct HTMatrix {
  OrderedSupport support;
  Matrix<T> rows;
  std::vector<ImagePoint> points;

  [[nodiscard]] std::size_t nu() const { return rows.size(); }
};

namespace detail {

template <typename Point>
auto build_ht_matrix(const FamilyDefinition& fam, const std::vector<Point>& points) {
  using T = scalar_for_t<Point>;
  if (points.empty()) throw argument_error("HT-matrix needs at least one point");
  HTMatrix<T> m;
  m.support = generic_support(fam);
  for (std::size_t j = 0; j < points.size(); ++j) {
    auto hp = hough_poly_at(fam, points[j], j);
    if (hp.h != m.support.h)
      throw degenerate_point_error("point " + std::to_string(j) + " has Hough degree " +
                                       std::to_string(hp.h) + ", generic degree is " +
                                       std::to_string(m.support.h),
                                   j);
    std::vector<T> row;
    row.reserve(m.support.s());
    for (const auto& hom : m.support.monomials) {
      MonomialExp mono(std::vector<int>(hom.begin() + 1, hom.end()));
      auto it = hp.coeffs.find(mono);
      row.push_back(it == hp.coeffs.end() ? T(0) : it->second);
    }
    m.rows.push_back(std::move(row));
    m.points.push_back(hp.point);
  }
  return m;
}

}  // namespace detail

inline HTMatrix<double> ht_matrix(const FamilyDefinition& fam, const std::vector<ImagePoint>& points) {
  return detail::build_ht_matrix(fam, points);
}

inline HTMatrix<Rational> ht_matrix(const FamilyDefinition& fam,
                                    const std::vector<ExactPoint>& points) {
  return detail::build_ht_matrix(fam, points);
}

/// Rank of the HT-matrix: exact for rational entries, otherwise elimination
/// with pivot threshold rel_eps * max|entry|.
template <typename T>
int nu_best(const HTMatrix<T>& m, double rel_eps = kRankEpsilon) {
  return static_cast<int>(matrix_rank(m.rows, rel_eps));
}

/// First maximal independent set of rows, scanning in input order.
template <typename T>
std::vector<std::size_t> select_generator_rows(const HTMatrix<T>& m, double rel_eps = kRankEpsilon) {
  return greedy_row_basis(m.rows, rel_eps).kept_rows;
}

inline int nu_best_prime(const FamilyDefinition& fam) {
  const int s = static_cast<int>(generic_support(fam).s());
  return std::min(s - 1, nu_opt(fam));
}

/// CSV with one row per point; the header names the support monomials.
template <typename T>
void write_ht_matrix_csv(std::ostream& out, const HTMatrix<T>& m,
                         const std::vector<std::string>& param_names) {
  for (std::size_t k = 0; k < m.support.s(); ++k) {
    if (k) out << ',';
    out << m.support.column_name(k, param_names);
  }
  out << '\n';
  for (const auto& row : m.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      if constexpr (std::is_same_v<T, Rational>) {
        out << to_string(row[k]);
      } else {
        std::ostringstream s;
        s.precision(17);
        s << row[k];
        out << s.str();
      }
    }
    out << '\n';
  }
}

}  // namespace hough
