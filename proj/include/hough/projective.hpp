#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "hough/errors.hpp"
#include "hough/rational.hpp"

namespace hough {

/// Complex number with rational parts; enough to represent base points such
/// as [i, 1, 0] exactly.
struct GaussianRational {
  Rational re = 0;
  Rational im = 0;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}  // NOLINT

  [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }
  [[nodiscard]] std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Point [x0, x1, x2] of the complex projective plane. Points declared with
/// Gaussian-rational coordinates keep an exact copy alongside the
/// double-precision one.
class ComplexProjectivePoint {
 public:
  static constexpr double kEqualityTol = 1e-9;

  ComplexProjectivePoint(std::complex<double> x0, std::complex<double> x1,
                         std::complex<double> x2)
      : approx_{x0, x1, x2} {
    validate();
  }

  ComplexProjectivePoint(GaussianRational x0, GaussianRational x1, GaussianRational x2)
      : approx_{x0.to_complex(), x1.to_complex(), x2.to_complex()},
        exact_(std::array<GaussianRational, 3>{std::move(x0), std::move(x1), std::move(x2)}) {
    if ((*exact_)[0].is_zero() && (*exact_)[1].is_zero() && (*exact_)[2].is_zero())
      throw argument_error("projective point with all coordinates zero");
  }

  [[nodiscard]] const std::array<std::complex<double>, 3>& coords() const { return approx_; }
  [[nodiscard]] const std::optional<std::array<GaussianRational, 3>>& exact() const {
    return exact_;
  }
  [[nodiscard]] bool has_exact() const { return exact_.has_value(); }

  /// Off the line at infinity x2 = 0.
  [[nodiscard]] bool is_affine() const {
    if (exact_) return !(*exact_)[2].is_zero();
    return std::abs(approx_[2]) > kEqualityTol * max_modulus();
  }

  /// Affine real image point when this point is affine with (near) real
  /// dehomogenized coordinates.
  [[nodiscard]] std::optional<std::pair<double, double>> real_affine() const {
    if (!is_affine()) return std::nullopt;
    auto x = approx_[0] / approx_[2];
    auto y = approx_[1] / approx_[2];
    if (std::abs(x.imag()) > kEqualityTol || std::abs(y.imag()) > kEqualityTol)
      return std::nullopt;
    return std::make_pair(x.real(), y.real());
  }

  /// Scaled so that the first coordinate with modulus above tolerance is 1.
  [[nodiscard]] std::array<std::complex<double>, 3> normalized() const {
    const double scale = max_modulus();
    for (const auto& c : approx_) {
      if (std::abs(c) > kEqualityTol * scale) {
        std::array<std::complex<double>, 3> out{};
        for (std::size_t k = 0; k < 3; ++k) out[k] = approx_[k] / c;
        return out;
      }
    }
    throw argument_error("projective point with all coordinates zero");
  }

  /// Equality up to a nonzero complex scalar.
  friend bool operator==(const ComplexProjectivePoint& a, const ComplexProjectivePoint& b) {
    if (a.exact_ && b.exact_) {
      // Proportional iff all 2x2 minors vanish.
      const auto& p = *a.exact_;
      const auto& q = *b.exact_;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
          if (!(p[i] * q[j] - p[j] * q[i]).is_zero()) return false;
      return true;
    }
    auto na = a.normalized();
    auto nb = b.normalized();
    for (std::size_t k = 0; k < 3; ++k)
      if (std::abs(na[k] - nb[k]) > kEqualityTol) return false;
    return true;
  }

 private:
  [[nodiscard]] double max_modulus() const {
    return std::max({std::abs(approx_[0]), std::abs(approx_[1]), std::abs(approx_[2])});
  }

  void validate() const {
    for (const auto& c : approx_)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw argument_error("non-finite projective coordinate");
    if (max_modulus() == 0.0) throw argument_error("projective point with all coordinates zero");
  }

  std::array<std::complex<double>, 3> approx_;
  std::optional<std::array<GaussianRational, 3>> exact_;
};

}  // namespace hough
