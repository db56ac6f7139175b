#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hough/errors.hpp"
#include "hough/rational.hpp"

namespace hough {

/// Point of the real image plane.
struct ImagePoint {
  double x = 0.0;
  double y = 0.0;

  [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y); }
  friend bool operator==(const ImagePoint&, const ImagePoint&) = default;
};

/// Image point with exact coordinates, used for rank and linear-solve work.
struct ExactPoint {
  Surd x;
  Surd y;

  ExactPoint() = default;
  ExactPoint(Surd px, Surd py) : x(std::move(px)), y(std::move(py)) {}
  ExactPoint(const Rational& px, const Rational& py) : x(px), y(py) {}

  [[nodiscard]] ImagePoint approx() const { return {x.to_double(), y.to_double()}; }
};

/// Parameter tuple (lambda_1, ..., lambda_t).
struct ParamPoint {
  std::vector<double> coords;

  ParamPoint() = default;
  ParamPoint(std::initializer_list<double> c) : coords(c) {}
  explicit ParamPoint(std::vector<double> c) : coords(std::move(c)) {}

  [[nodiscard]] std::size_t size() const { return coords.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return coords[k]; }
  [[nodiscard]] bool finite() const {
    for (double v : coords)
      if (!std::isfinite(v)) return false;
    return true;
  }
  friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double center() const { return 0.5 * (lo + hi); }
  [[nodiscard]] bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned rectangle of the image plane.
struct Window {
  Interval x_range;
  Interval y_range;

  Window() = default;
  Window(Interval xr, Interval yr) : x_range(xr), y_range(yr) {
    if (!(x_range.hi > x_range.lo) || !(y_range.hi > y_range.lo))
      throw argument_error("window intervals must be non-empty");
  }

  [[nodiscard]] bool contains(const ImagePoint& p) const {
    return x_range.contains(p.x) && y_range.contains(p.y);
  }
  friend bool operator==(const Window&, const Window&) = default;
};

}  // namespace hough
