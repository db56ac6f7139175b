#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "hough/errors.hpp"

namespace hough {

/// Arbitrary-precision rational with expression templates disabled, so that
/// `auto` behaves like an ordinary value type.
using Rational = boost::multiprecision::number<
    boost::multiprecision::cpp_rational_backend,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<
    boost::multiprecision::cpp_int_backend<>,
    boost::multiprecision::et_off>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double v) { return v; }

inline BigInt numerator_of(const Rational& r) {
  return BigInt(boost::multiprecision::numerator(r));
}
inline BigInt denominator_of(const Rational& r) {
  return BigInt(boost::multiprecision::denominator(r));
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw argument_error("rational with zero denominator");
  return Rational(num) / Rational(den);
}

/// Exact rational value of a finite double (every binary64 is a dyadic rational).
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw argument_error("non-finite value has no rational form");
  int exp = 0;
  double mant = std::frexp(v, &exp);
  // 53 significant bits fit exactly in int64 after scaling.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational r(scaled);
  exp -= 53;
  Rational two(2);
  Rational p(1);
  for (int k = 0; k < std::abs(exp); ++k) p *= two;
  return exp >= 0 ? r * p : r / p;
}

inline std::string to_string(const Rational& r) {
  const BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

/// Parses "p", "p/q", or a decimal literal such as "-0.125" or "3.5e-2"
/// exactly (decimal literals are not routed through binary floating point).
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw argument_error("empty numeric field");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw argument_error("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt digits = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_point) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw argument_error("not a number: '" + std::string(text) + "'");
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E')
      throw argument_error("not a number: '" + std::string(text) + "'");
    std::string exp_text(text.substr(pos + 1));
    if (exp_text.empty()) throw argument_error("bad exponent in '" + std::string(text) + "'");
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != exp_text.size() || std::abs(exponent) > 4000)
      throw argument_error("bad exponent in '" + std::string(text) + "'");
  }
  exponent -= frac_digits;
  Rational value(digits);
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(exponent)));
  if (exponent >= 0)
    value *= Rational(ten_pow);
  else
    value /= Rational(ten_pow);
  return negative ? -value : value;
}

/// Exact real number of the form sign * radicand^(1/index).
///
/// Integer powers whose exponent is a multiple of `index` are rational, which
/// is all that is needed to evaluate polynomials exactly at points such as
/// (1/2, sqrt(13/8)) on y^2 = x^3 + x + 1.
class Surd {
 public:
  Surd() = default;
  Surd(const Rational& value) : radicand_(abs(value)), sign_(value < 0 ? -1 : 1) {}  // NOLINT
  Surd(std::int64_t value) : Surd(Rational(value)) {}                                // NOLINT

  static Surd root(const Rational& radicand, int index, int sign = 1) {
    if (radicand < 0) throw argument_error("surd radicand must be non-negative");
    if (index < 1) throw argument_error("surd index must be positive");
    if (sign != 1 && sign != -1) throw argument_error("surd sign must be +1 or -1");
    Surd s;
    s.radicand_ = radicand;
    s.index_ = index;
    s.sign_ = sign;
    return s;
  }

  [[nodiscard]] int index() const { return index_; }
  [[nodiscard]] int sign() const { return sign_; }
  [[nodiscard]] const Rational& radicand() const { return radicand_; }
  [[nodiscard]] bool is_rational() const { return index_ == 1; }

  /// Exact value of this^n; throws if the result is not provably rational.
  [[nodiscard]] Rational pow(int n) const {
    if (n < 0) throw argument_error("negative surd power");
    if (n == 0) return Rational(1);
    if (radicand_ == 0) return Rational(0);
    if (n % index_ != 0)
      throw argument_error("power " + std::to_string(n) + " of an index-" +
                           std::to_string(index_) + " surd is not rational");
    Rational r = 1;
    for (int k = 0; k < n / index_; ++k) r *= radicand_;
    if (sign_ < 0 && n % 2 == 1) r = -r;
    return r;
  }

  [[nodiscard]] double to_double() const {
    double mag = std::pow(hough::to_double(radicand_), 1.0 / index_);
    return sign_ < 0 ? -mag : mag;
  }

  friend bool operator==(const Surd& a, const Surd& b) {
    if (a.radicand_ == 0 && b.radicand_ == 0) return true;
    if (a.sign_ != b.sign_) return false;
    // Compare radicand^(L/index) for L = lcm of the indices.
    int l = std::lcm(a.index_, b.index_);
    Rational pa = 1, pb = 1;
    for (int k = 0; k < l / a.index_; ++k) pa *= a.radicand_;
    for (int k = 0; k < l / b.index_; ++k) pb *= b.radicand_;
    return pa == pb;
  }

 private:
  Rational radicand_ = 0;
  int index_ = 1;
  int sign_ = 1;
};

}  // namespace hough
