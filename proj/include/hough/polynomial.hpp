#pragma once

#include <algorithm>
#include <climits>
#include <compare>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "hough/errors.hpp"
#include "hough/rational.hpp"

namespace hough {

/// Exponent tuple (m_1, ..., m_t) of a parameter monomial.
struct MonomialExp {
  std::vector<int> exponents;

  MonomialExp() = default;
  explicit MonomialExp(std::vector<int> e) : exponents(std::move(e)) {
    for (int v : exponents)
      if (v < 0) throw argument_error("monomial exponents must be non-negative");
  }

  [[nodiscard]] std::size_t size() const { return exponents.size(); }
  [[nodiscard]] int total_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
  }
  [[nodiscard]] int operator[](std::size_t k) const { return exponents[k]; }

  auto operator<=>(const MonomialExp&) const = default;
};

/// lambda^m for a real parameter vector.
inline double monomial_value(const MonomialExp& m, const std::vector<double>& lambda) {
  double v = 1.0;
  for (std::size_t k = 0; k < m.size(); ++k)
    for (int e = 0; e < m[k]; ++e) v *= lambda[k];
  return v;
}

inline Rational monomial_value(const MonomialExp& m, const std::vector<Rational>& lambda) {
  Rational v = 1;
  for (std::size_t k = 0; k < m.size(); ++k)
    for (int e = 0; e < m[k]; ++e) v *= lambda[k];
  return v;
}

/// Sparse polynomial in the image coordinates (x, y) with rational coefficients.
class BivarPoly {
 public:
  static constexpr int kZeroDegree = INT_MIN;

  struct Term {
    int i;
    int j;
    double coeff;
  };

  BivarPoly() = default;

  /// Builds from (i, j, coefficient) triples; repeated exponents are summed.
  BivarPoly(std::initializer_list<std::tuple<int, int, Rational>> terms) {
    for (const auto& [i, j, c] : terms) add_term(i, j, c);
  }

  void add_term(int i, int j, const Rational& c) {
    if (i < 0 || j < 0) throw argument_error("bivariate exponents must be non-negative");
    auto key = std::make_pair(i, j);
    Rational sum = c;
    if (auto it = terms_.find(key); it != terms_.end()) sum += it->second;
    if (sum == 0)
      terms_.erase(key);
    else
      terms_[key] = sum;
    refresh();
  }

  [[nodiscard]] const std::map<std::pair<int, int>, Rational>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] int degree() const { return degree_; }

  [[nodiscard]] double eval(double x, double y) const {
    double acc = 0.0;
    for (const Term& t : fast_) acc += t.coeff * ipow(x, t.i) * ipow(y, t.j);
    return acc;
  }

  /// Sum of |c| |x|^i |y|^j; the natural magnitude for residual tolerances.
  [[nodiscard]] double eval_abs(double x, double y) const {
    double acc = 0.0;
    for (const Term& t : fast_)
      acc += std::abs(t.coeff) * std::abs(ipow(x, t.i) * ipow(y, t.j));
    return acc;
  }

  [[nodiscard]] Rational eval(const Surd& x, const Surd& y) const {
    Rational acc = 0;
    for (const auto& [ij, c] : terms_) acc += c * x.pow(ij.first) * y.pow(ij.second);
    return acc;
  }

  [[nodiscard]] Rational eval(const Rational& x, const Rational& y) const {
    Rational acc = 0;
    for (const auto& [ij, c] : terms_) {
      Rational v = c;
      for (int k = 0; k < ij.first; ++k) v *= x;
      for (int k = 0; k < ij.second; ++k) v *= y;
      acc += v;
    }
    return acc;
  }

  /// Value of the degree-d homogenization x^i y^j -> x0^i x1^j x2^(d-i-j).
  /// `C` is any ring type constructible via `lift(Rational)`.
  template <typename C, typename Lift>
  [[nodiscard]] C eval_homogeneous(const C& x0, const C& x1, const C& x2, int d,
                                   Lift lift) const {
    C acc = lift(Rational(0));
    for (const auto& [ij, c] : terms_) {
      const int k = d - ij.first - ij.second;
      if (k < 0) throw argument_error("homogenization degree below polynomial degree");
      C v = lift(c);
      for (int e = 0; e < ij.first; ++e) v = v * x0;
      for (int e = 0; e < ij.second; ++e) v = v * x1;
      for (int e = 0; e < k; ++e) v = v * x2;
      acc = acc + v;
    }
    return acc;
  }

  [[nodiscard]] const std::vector<Term>& fast_terms() const { return fast_; }

  friend bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.terms_ == b.terms_; }

  BivarPoly operator-() const {
    BivarPoly r;
    for (const auto& [ij, c] : terms_) r.terms_[ij] = -c;
    r.refresh();
    return r;
  }

 private:
  static double ipow(double v, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= v;
    return r;
  }

  void refresh() {
    fast_.clear();
    degree_ = kZeroDegree;
    for (const auto& [ij, c] : terms_) {
      fast_.push_back({ij.first, ij.second, to_double(c)});
      degree_ = std::max(degree_, ij.first + ij.second);
    }
  }

  std::map<std::pair<int, int>, Rational> terms_;
  std::vector<Term> fast_;
  int degree_ = kZeroDegree;
};

inline std::string monomial_name(const MonomialExp& m,
                                 const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] == 0) continue;
    out += names.at(k);
    if (m[k] > 1) out += "^" + std::to_string(m[k]);
  }
  return out.empty() ? "1" : out;
}

}  // namespace hough
