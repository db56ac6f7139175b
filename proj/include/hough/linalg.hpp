#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <type_traits>
#include <vector>

#include "hough/errors.hpp"
#include "hough/rational.hpp"

namespace hough {

template <typename T>
using Matrix = std::vector<std::vector<T>>;

/// Default relative pivot threshold for floating-point elimination.
inline constexpr double kRankEpsilon = 1e-9;

namespace detail {

template <typename T>
constexpr bool is_exact_v = std::is_same_v<T, Rational>;

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Rational& v) { return std::abs(to_double(v)); }

template <typename T>
double max_magnitude(const Matrix<T>& m) {
  double out = 0.0;
  for (const auto& row : m)
    for (const auto& v : row) out = std::max(out, magnitude(v));
  return out;
}

/// Zero test: exact for rationals, below `threshold` for doubles.
template <typename T>
bool negligible(const T& v, double threshold) {
  if constexpr (is_exact_v<T>)
    return v == 0;
  else
    return std::abs(v) <= threshold;
}

/// Pivot position in `row` among columns [0, cols): first nonzero for exact
/// arithmetic (keeps fractions small), largest magnitude otherwise.
template <typename T>
std::optional<std::size_t> choose_pivot(const std::vector<T>& row, std::size_t cols,
                                        double threshold) {
  std::optional<std::size_t> best;
  double best_mag = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (negligible(row[c], threshold)) continue;
    if constexpr (is_exact_v<T>) {
      return c;
    } else {
      if (!best || std::abs(row[c]) > best_mag) {
        best = c;
        best_mag = std::abs(row[c]);
      }
    }
  }
  return best;
}

}  // namespace detail

/// Reduced basis of a row space, built by scanning rows in input order and
/// keeping each row that is independent of those already kept.
template <typename T>
struct RowBasis {
  std::vector<std::size_t> kept_rows;      // indices into the input matrix
  std::vector<std::vector<T>> vectors;     // reduced rows, pivot entry 1
  std::vector<std::size_t> pivot_columns;  // pivot column of each reduced row

  [[nodiscard]] std::size_t rank() const { return kept_rows.size(); }
};

template <typename T>
RowBasis<T> greedy_row_basis(const Matrix<T>& m, double rel_eps = kRankEpsilon) {
  RowBasis<T> basis;
  if (m.empty()) return basis;
  const std::size_t cols = m.front().size();
  for (const auto& row : m)
    if (row.size() != cols) throw argument_error("ragged matrix");
  const double threshold = rel_eps * detail::max_magnitude(m);

  for (std::size_t r = 0; r < m.size(); ++r) {
    std::vector<T> residual = m[r];
    for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
      const T factor = residual[basis.pivot_columns[k]];
      if (factor == T(0)) continue;
      for (std::size_t c = 0; c < cols; ++c) residual[c] -= factor * basis.vectors[k][c];
      residual[basis.pivot_columns[k]] = T(0);
    }
    auto pivot = detail::choose_pivot(residual, cols, threshold);
    if (!pivot) continue;
    const T inv = T(1) / residual[*pivot];
    for (auto& v : residual) v *= inv;
    residual[*pivot] = T(1);
    basis.kept_rows.push_back(r);
    basis.vectors.push_back(std::move(residual));
    basis.pivot_columns.push_back(*pivot);
  }
  return basis;
}

template <typename T>
std::size_t matrix_rank(const Matrix<T>& m, double rel_eps = kRankEpsilon) {
  return greedy_row_basis(m, rel_eps).rank();
}

/// Solution set of A x = b.
template <typename T>
struct LinearSystemSolution {
  enum class Kind { Unique, Underdetermined, Inconsistent };
  Kind kind = Kind::Inconsistent;
  std::size_t rank = 0;
  std::vector<T> anchor;               // minimal-norm solution (when consistent)
  std::vector<std::vector<T>> kernel;  // basis of the null space of A
};

namespace detail {

/// Solves a square nonsingular system by Gauss-Jordan elimination.
template <typename T>
std::vector<T> solve_square(Matrix<T> a, std::vector<T> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = -1.0;
    for (std::size_t r = col; r < n; ++r) {
      if constexpr (is_exact_v<T>) {
        if (a[r][col] != 0) {
          piv = r;
          best = 1.0;
          break;
        }
      } else if (std::abs(a[r][col]) > best) {
        best = std::abs(a[r][col]);
        piv = r;
      }
    }
    if (best <= 0.0) throw std::logic_error("singular Gram matrix");
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    const T inv = T(1) / a[col][col];
    for (std::size_t c = col; c < n; ++c) a[col][c] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == T(0)) continue;
      const T f = a[r][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  return b;
}

}  // namespace detail

/// Classifies and solves A x = b. Rationals are handled exactly; doubles
/// use pivot threshold rel_eps * max|A|.
template <typename T>
LinearSystemSolution<T> solve_linear_system(const Matrix<T>& a, const std::vector<T>& b,
                                            double rel_eps = kRankEpsilon) {
  if (a.empty()) throw argument_error("empty linear system");
  if (a.size() != b.size()) throw argument_error("right-hand side length mismatch");
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  for (const auto& row : a)
    if (row.size() != cols) throw argument_error("ragged matrix");

  Matrix<T> aug(rows, std::vector<T>(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) aug[r][c] = a[r][c];
    aug[r][cols] = b[r];
  }
  const double threshold = rel_eps * std::max(detail::max_magnitude(a), 1e-300);

  // Gauss-Jordan to reduced row echelon form over the coefficient columns.
  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  for (std::size_t col = 0; col < cols && prow < rows; ++col) {
    std::optional<std::size_t> best;
    double best_mag = 0.0;
    for (std::size_t r = prow; r < rows; ++r) {
      if (detail::negligible(aug[r][col], threshold)) continue;
      if constexpr (detail::is_exact_v<T>) {
        best = r;
        break;
      } else if (!best || std::abs(aug[r][col]) > best_mag) {
        best = r;
        best_mag = std::abs(aug[r][col]);
      }
    }
    if (!best) continue;
    std::swap(aug[prow], aug[*best]);
    const T inv = T(1) / aug[prow][col];
    for (auto& v : aug[prow]) v *= inv;
    aug[prow][col] = T(1);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == prow || aug[r][col] == T(0)) continue;
      const T f = aug[r][col];
      for (std::size_t c = 0; c <= cols; ++c) aug[r][c] -= f * aug[prow][c];
      aug[r][col] = T(0);
    }
    pivots.push_back(col);
    ++prow;
  }

  LinearSystemSolution<T> out;
  out.rank = pivots.size();
  const double rhs_threshold =
      rel_eps * std::max({detail::max_magnitude(aug), 1e-300});
  for (std::size_t r = out.rank; r < rows; ++r) {
    if (!detail::negligible(aug[r][cols], rhs_threshold)) {
      out.kind = LinearSystemSolution<T>::Kind::Inconsistent;
      return out;
    }
  }

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<T> particular(cols, T(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) particular[pivots[k]] = aug[k][cols];
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(cols, T(0));
    v[f] = T(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -aug[k][f];
    out.kernel.push_back(std::move(v));
  }

  // Minimal-norm anchor: remove the kernel component of the particular solution.
  out.anchor = particular;
  if (!out.kernel.empty()) {
    const std::size_t k = out.kernel.size();
    Matrix<T> gram(k, std::vector<T>(k, T(0)));
    std::vector<T> rhs(k, T(0));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < cols; ++c) gram[i][j] += out.kernel[i][c] * out.kernel[j][c];
      for (std::size_t c = 0; c < cols; ++c) rhs[i] += out.kernel[i][c] * particular[c];
    }
    const auto coeff = detail::solve_square(gram, rhs);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = 0; c < cols; ++c) out.anchor[c] -= coeff[i] * out.kernel[i][c];
  }
  out.kind = out.kernel.empty() ? LinearSystemSolution<T>::Kind::Unique
                                : LinearSystemSolution<T>::Kind::Underdetermined;
  return out;
}

}  // namespace hough
