#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hough/errors.hpp"
#include "hough/family.hpp"

namespace hough {

namespace detail {

using ReferenceEquation =
    std::function<Rational(const std::vector<Rational>& lambda, const Rational& x, const Rational& y)>;

inline MonomialExp mono(std::initializer_list<int> e) { return MonomialExp(std::vector<int>(e)); }

inline Rational rpow(const Rational& v, int n) {
  Rational r = 1;
  for (int k = 0; k < n; ++k) r *= v;
  return r;
}

inline GaussianRational gi(long re, long im = 0) { return {Rational(re), Rational(im)}; }

/// Confirms that the term expansion reproduces the textbook form of the
/// equation, exactly, at a spread of rational points and parameters.
inline void check_expansion(const FamilyDefinition& fam, const ReferenceEquation& reference) {
  const std::vector<Rational> samples = {Rational(-3, 2), Rational(2, 7), Rational(5, 3),
                                         Rational(-1, 4), Rational(3)};
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::vector<Rational> lambda;
    for (int k = 0; k < fam.t(); ++k)
      lambda.push_back(samples[(s + 2 * k + 1) % samples.size()] + Rational(k + 1, 3));
    const Rational& x = samples[s];
    const Rational& y = samples[(s + 3) % samples.size()];
    if (eval_curve(fam, lambda, ExactPoint(x, y)) != reference(lambda, x, y))
      throw std::logic_error("family '" + fam.name() + "' does not expand its reference equation");
  }
}

inline FamilyDefinition finish(FamilyData data, const ReferenceEquation& reference) {
  FamilyDefinition fam(std::move(data));
  check_expansion(fam, reference);
  for (const auto& q : fam.base_points())
    if (!verify_base_point(fam, q))
      throw std::logic_error("declared base point fails verification in '" + fam.name() + "'");
  return fam;
}

}  // namespace detail

/// Names accepted by builtin().
inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "descartes_folium", "elliptic3",  "elliptic2",    "quartic_triple", "quartic_tacnode",
      "lamet",            "conic_pencil", "conic_ex0", "lines"};
  return names;
}

/// Built-in families. `extra` is the (even) exponent of the Lamet curve.
inline FamilyDefinition builtin(const std::string& name, std::optional<int> extra = std::nullopt) {
  using detail::gi;
  using detail::mono;
  using detail::rpow;
  using R = Rational;

  if (name == "descartes_folium") {
    // 3axy - x^3 - by^3 = 0
    FamilyData data;
    data.name = name;
    data.t = 2;
    data.d = 3;
    data.terms = {{mono({1, 0}), BivarPoly{{1, 1, R(3)}}},
                  {mono({0, 1}), BivarPoly{{0, 3, R(-1)}}},
                  {mono({0, 0}), BivarPoly{{3, 0, R(-1)}}}};
    data.base_points = {ComplexProjectivePoint(gi(0), gi(0), gi(1))};
    data.param_region = {{0.5, 11.0, 0.02}, {0.5, 11.0, 0.02}};
    data.window = {"folium", {0.0, 3.14159265358979323846}, Window({-5.0, 5.0}, {-5.0, 5.0})};
    data.solve_for_last = true;
    data.reference_params = ParamPoint{3.0, 1.0};
    return detail::finish(std::move(data), [](const auto& l, const R& x, const R& y) {
      return 3 * l[0] * x * y - x * x * x - l[1] * y * y * y;
    });
  }

  if (name == "elliptic3" || name == "elliptic2") {
    // y^2 = m x^3 + a x + b, written as f = a x + b + m x^3 - y^2.
    const bool three = name == "elliptic3";
    FamilyData data;
    data.name = name;
    data.t = three ? 3 : 2;
    data.d = 3;
    if (three) {
      data.terms = {{mono({1, 0, 0}), BivarPoly{{1, 0, R(1)}}},
                    {mono({0, 1, 0}), BivarPoly{{0, 0, R(1)}}},
                    {mono({0, 0, 1}), BivarPoly{{3, 0, R(1)}}},
                    {mono({0, 0, 0}), BivarPoly{{0, 2, R(-1)}}}};
      data.param_region = {{-14.0, 6.0, 0.02}, {-3.0, 17.0, 0.02}, {0.5, 2.0, 0.01}};
      data.reference_params = ParamPoint{1.0, 1.0, 1.0};
      data.param_names = {"A", "B", "M"};
    } else {
      data.terms = {{mono({1, 0}), BivarPoly{{1, 0, R(1)}}},
                    {mono({0, 1}), BivarPoly{{0, 0, R(1)}}},
                    {mono({0, 0}), BivarPoly{{3, 0, R(1)}, {0, 2, R(-1)}}}};
      data.param_region = {{-14.0, 6.0, 0.02}, {-3.0, 17.0, 0.02}};
      data.reference_params = ParamPoint{-4.0, 7.0};
    }
    data.base_points = {ComplexProjectivePoint(gi(0), gi(1), gi(0))};
    data.window = {"elliptic", {-5.0, 5.0}, Window({-5.0, 5.0}, {-5.0, 5.0})};
    data.solve_for_last = true;
    return detail::finish(std::move(data), [three](const auto& l, const R& x, const R& y) {
      const R m = three ? l[2] : R(1);
      return m * x * x * x + l[0] * x + l[1] - y * y;
    });
  }

  if (name == "quartic_triple") {
    // y (x - a y)^2 - b (x^2 + y^2)^2 = 0
    FamilyData data;
    data.name = name;
    data.t = 2;
    data.d = 4;
    data.terms = {{mono({2, 0}), BivarPoly{{0, 3, R(1)}}},
                  {mono({1, 0}), BivarPoly{{1, 2, R(-2)}}},
                  {mono({0, 1}), BivarPoly{{4, 0, R(-1)}, {2, 2, R(-2)}, {0, 4, R(-1)}}},
                  {mono({0, 0}), BivarPoly{{2, 1, R(1)}}}};
    data.base_points = {ComplexProjectivePoint(gi(0), gi(0), gi(1)),
                        ComplexProjectivePoint(gi(0, 1), gi(1), gi(0)),
                        ComplexProjectivePoint(gi(0, -1), gi(1), gi(0))};
    data.param_region = {{-5.0, 5.0, 0.01}, {0.1, 5.0, 0.01}};
    data.window = {"polar_triple", {0.0, 3.14159265358979323846}, std::nullopt};
    data.solve_for_last = true;
    data.reference_params = ParamPoint{0.2, 0.5};
    return detail::finish(std::move(data), [](const auto& l, const R& x, const R& y) {
      const R u = x - l[0] * y;
      return y * u * u - l[1] * rpow(x * x + y * y, 2);
    });
  }

  if (name == "quartic_tacnode") {
    // y^2 (x - a)^2 - b y x^2 + x^4 = 0
    FamilyData data;
    data.name = name;
    data.t = 2;
    data.d = 4;
    data.terms = {{mono({2, 0}), BivarPoly{{0, 2, R(1)}}},
                  {mono({1, 0}), BivarPoly{{1, 2, R(-2)}}},
                  {mono({0, 1}), BivarPoly{{2, 1, R(-1)}}},
                  {mono({0, 0}), BivarPoly{{2, 2, R(1)}, {4, 0, R(1)}}}};
    data.base_points = {ComplexProjectivePoint(gi(0), gi(0), gi(1)),
                        ComplexProjectivePoint(gi(0), gi(1), gi(0)),
                        ComplexProjectivePoint(gi(0, 1), gi(1), gi(0)),
                        ComplexProjectivePoint(gi(0, -1), gi(1), gi(0))};
    data.param_region = {{-9.0, 11.0, 0.02}, {-2.0, 18.0, 0.02}};
    data.window = {"tacnode", {-4.0, 6.0}, Window({-3.5, 5.5}, {-1.0, 15.0})};
    data.solve_for_last = true;
    data.reference_params = ParamPoint{1.0, 8.0};
    return detail::finish(std::move(data), [](const auto& l, const R& x, const R& y) {
      const R u = x - l[0];
      return y * y * u * u - l[1] * y * x * x + rpow(x, 4);
    });
  }

  if (name == "lamet") {
    // b x^m + a^m y^m = a^m b, written as f = A^m B - y^m A^m - x^m B.
    const int m = extra.value_or(4);
    if (m < 2 || m % 2 != 0)
      throw argument_error("Lamet exponent must be even and at least 2, got " + std::to_string(m));
    FamilyData data;
    data.name = name;
    data.t = 2;
    data.d = m;
    data.terms = {{mono({m, 1}), BivarPoly{{0, 0, R(1)}}},
                  {mono({m, 0}), BivarPoly{{0, m, R(-1)}}},
                  {mono({0, 1}), BivarPoly{{m, 0, R(-1)}}}};
    data.param_region = {{0.5, 5.5, 0.01}, {0.5, 5.5, 0.01}};
    data.window = {"lamet", {0.0, 2.0 * 3.14159265358979323846}, std::nullopt};
    data.solve_for_last = true;
    data.reference_params = ParamPoint{2.0, 1.0};
    return detail::finish(std::move(data), [m](const auto& l, const R& x, const R& y) {
      return rpow(l[0], m) * l[1] - l[1] * rpow(x, m) - rpow(l[0], m) * rpow(y, m);
    });
  }

  if (name == "conic_pencil") {
    // a (x^2 + y^2 + 1) + b (x^2 + x + y) = 0
    FamilyData data;
    data.name = name;
    data.t = 2;
    data.d = 2;
    data.terms = {{mono({1, 0}), BivarPoly{{2, 0, R(1)}, {0, 2, R(1)}, {0, 0, R(1)}}},
                  {mono({0, 1}), BivarPoly{{2, 0, R(1)}, {1, 0, R(1)}, {0, 1, R(1)}}}};
    // Affine base points: x^4 + 2x^3 + 2x^2 + 1 = 0 and y = -x^2 - x.
    const std::complex<double> roots[] = {{0.18978473560806513535, -0.60280267944017330024},
                                          {0.18978473560806513535, 0.60280267944017330024},
                                          {-1.1897847356080651354, 1.0431849752635072885},
                                          {-1.1897847356080651354, -1.0431849752635072885}};
    for (const auto& x : roots)
      data.base_points.emplace_back(x, -x * x - x, std::complex<double>(1.0, 0.0));
    data.param_region = {{-2.0, 2.0, 0.02}, {-2.0, 2.0, 0.02}};
    data.window = {"scan", {0.75, 5.0}, Window({0.75, 5.0}, {-3.0, 4.0})};
    data.solve_for_last = true;
    data.reference_params = ParamPoint{1.0, -1.0};
    return detail::finish(std::move(data), [](const auto& l, const R& x, const R& y) {
      return l[0] * (x * x + y * y + 1) + l[1] * (x * x + x + y);
    });
  }

  if (name == "conic_ex0") {
    // a^2 x^2 + b y + x = 0
    FamilyData data;
    data.name = name;
    data.t = 2;
    data.d = 2;
    data.terms = {{mono({2, 0}), BivarPoly{{2, 0, R(1)}}},
                  {mono({0, 1}), BivarPoly{{0, 1, R(1)}}},
                  {mono({0, 0}), BivarPoly{{1, 0, R(1)}}}};
    data.base_points = {ComplexProjectivePoint(gi(0), gi(1), gi(0)),
                        ComplexProjectivePoint(gi(0), gi(0), gi(1))};
    data.param_region = {{-2.0, 2.0, 0.02}, {-2.0, 2.0, 0.02}};
    data.window = {"scan", {-3.0, 2.0}, Window({-3.0, 2.0}, {-7.0, 1.0})};
    data.solve_for_last = true;
    data.reference_params = ParamPoint{1.0, 1.0};
    return detail::finish(std::move(data), [](const auto& l, const R& x, const R& y) {
      return l[0] * l[0] * x * x + l[1] * y + x;
    });
  }

  if (name == "lines") {
    // a x + b y + c = 0
    FamilyData data;
    data.name = name;
    data.t = 3;
    data.d = 1;
    data.terms = {{mono({1, 0, 0}), BivarPoly{{1, 0, R(1)}}},
                  {mono({0, 1, 0}), BivarPoly{{0, 1, R(1)}}},
                  {mono({0, 0, 1}), BivarPoly{{0, 0, R(1)}}}};
    data.param_region = {{-2.0, 2.0, 0.02}, {-2.0, 2.0, 0.02}, {-2.0, 2.0, 0.02}};
    data.window = {"scan", {-3.0, 3.0}, Window({-3.0, 3.0}, {-4.0, 4.0})};
    data.solve_for_last = true;
    data.reference_params = ParamPoint{1.0, 1.0, 1.0};
    return detail::finish(std::move(data), [](const auto& l, const R& x, const R& y) {
      return l[0] * x + l[1] * y + l[2];
    });
  }

  throw argument_error("unknown family '" + name + "'");
}

}  // namespace hough
