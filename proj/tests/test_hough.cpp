#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "hough/builtins.hpp"
#include "hough/ht_matrix.hpp"

using namespace hough;

namespace {

std::vector<int> hom(std::initializer_list<int> e) { return std::vector<int>(e); }

std::vector<ExactPoint> rational_points(std::initializer_list<std::pair<int, int>> pts) {
  std::vector<ExactPoint> out;
  for (auto [x, y] : pts) out.emplace_back(Rational(x), Rational(y));
  return out;
}

// Rational points of x^4 + 16 y^4 = 16 (Lamet, m = 4, a = 2, b = 1): y rational,
// x the real fourth root of 16 (1 - y^4).
std::vector<ExactPoint> lamet_points(int count) {
  std::vector<ExactPoint> out;
  for (int k = 0; k < count; ++k) {
    const Rational y(k - count / 2, count);
    const Rational x4 = 16 * (1 - y * y * y * y);
    out.emplace_back(Surd::root(x4, 4, k % 2 == 0 ? 1 : -1), Surd(y));
  }
  return out;
}

}  // namespace

TEST(HoughPoly, FoliumCoefficients) {
  auto fam = builtin("descartes_folium");
  const double xp = 1.25, yp = -0.5;
  auto hp = hough_poly(fam, ImagePoint{xp, yp});
  EXPECT_EQ(hp.h, 1);
  EXPECT_EQ(hp.owner, "descartes_folium");
  EXPECT_DOUBLE_EQ(hp.coeffs.at(MonomialExp({1, 0})), 3 * xp * yp);
  EXPECT_DOUBLE_EQ(hp.coeffs.at(MonomialExp({0, 1})), -yp * yp * yp);
  EXPECT_DOUBLE_EQ(hp.coeffs.at(MonomialExp({0, 0})), -xp * xp * xp);
}

TEST(HoughPoly, LametCoefficients) {
  auto fam = builtin("lamet", 4);
  auto hp = hough_poly(fam, ExactPoint(Rational(3, 2), Rational(-1, 3)));
  EXPECT_EQ(hp.h, 5);
  EXPECT_EQ(hp.coeffs.at(MonomialExp({4, 1})), 1);
  EXPECT_EQ(hp.coeffs.at(MonomialExp({4, 0})), -Rational(1, 81));
  EXPECT_EQ(hp.coeffs.at(MonomialExp({0, 1})), -Rational(81, 16));
}

TEST(HoughPoly, EllipticSymmetricPointsShareTransform) {
  auto fam = builtin("elliptic3");
  auto up = hough_poly(fam, ExactPoint(Rational(0), Rational(1)));
  auto down = hough_poly(fam, ExactPoint(Rational(0), Rational(-1)));
  ASSERT_EQ(up.coeffs.size(), 2u);
  EXPECT_EQ(up.coeffs.at(MonomialExp({0, 1, 0})), 1);
  EXPECT_EQ(up.coeffs.at(MonomialExp({0, 0, 0})), -1);
  EXPECT_EQ(up.coeffs, down.coeffs);
}

TEST(HoughPoly, AffineBasePointIsDegenerate) {
  EXPECT_THROW(hough_poly(builtin("descartes_folium"), ImagePoint{0.0, 0.0}),
               degenerate_point_error);
  EXPECT_THROW(hough_poly(builtin("quartic_tacnode"), ImagePoint{0.0, 0.0}),
               degenerate_point_error);
}

TEST(GenericSupport, Folium) {
  auto s = generic_support(builtin("descartes_folium"));
  EXPECT_EQ(s.h, 1);
  ASSERT_EQ(s.s(), 3u);
  // Lambda_0 > A > B
  EXPECT_EQ(s.monomials[0], hom({1, 0, 0}));
  EXPECT_EQ(s.monomials[1], hom({0, 1, 0}));
  EXPECT_EQ(s.monomials[2], hom({0, 0, 1}));
}

TEST(GenericSupport, Lamet) {
  auto s = generic_support(builtin("lamet", 4));
  EXPECT_EQ(s.h, 5);
  ASSERT_EQ(s.s(), 3u);
  EXPECT_EQ(s.monomials[0], hom({4, 0, 1}));  // B L0^4
  EXPECT_EQ(s.monomials[1], hom({1, 4, 0}));  // A^4 L0
  EXPECT_EQ(s.monomials[2], hom({0, 4, 1}));  // A^4 B
}

TEST(GenericSupport, LinesAndOrdering) {
  auto s = generic_support(builtin("lines"));
  EXPECT_EQ(s.h, 1);
  ASSERT_EQ(s.s(), 3u);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < s.s(); ++k) names.push_back(s.column_name(k, {"A", "B", "C"}));
  EXPECT_EQ(names, (std::vector<std::string>{"A", "B", "C"}));
  for (const auto& name : builtin_names()) {
    auto sup = generic_support(builtin(name));
    EXPECT_TRUE(std::is_sorted(sup.monomials.rbegin(), sup.monomials.rend())) << name;
    EXPECT_TRUE(std::adjacent_find(sup.monomials.begin(), sup.monomials.end()) ==
                sup.monomials.end());
    for (const auto& m : sup.monomials) {
      int total = 0;
      for (int e : m) total += e;
      EXPECT_EQ(total, sup.h) << name;
    }
  }
}

TEST(HTMatrix, ConicEx0) {
  auto fam = builtin("conic_ex0");
  auto m = ht_matrix(fam, rational_points({{1, -2}, {-1, 0}, {-2, -2}}));
  ASSERT_EQ(m.nu(), 3u);
  // Column order L0^2, B*L0, A^2.
  EXPECT_EQ(m.support.column_name(0, fam.param_names()), "L0^2");
  EXPECT_EQ(m.support.column_name(1, fam.param_names()), "B*L0");
  EXPECT_EQ(m.support.column_name(2, fam.param_names()), "A^2");
  const Matrix<Rational> expected = {{1, -2, 1}, {-1, 0, 1}, {-2, -2, 4}};
  EXPECT_EQ(m.rows, expected);
  EXPECT_EQ(nu_best(m), 2);
  EXPECT_EQ(select_generator_rows(m), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(nu_best_prime(fam), 2);
}

TEST(HTMatrix, ConicEx0RowRelation) {
  // Column layout (A^2, B, 1): row 3 = row 1 + 3 row 2.
  const Matrix<Rational> alt = {{1, -2, 1}, {1, 0, -1}, {4, -2, -2}};
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(alt[2][c], alt[0][c] + 3 * alt[1][c]);
  EXPECT_EQ(matrix_rank(alt), 2u);
  EXPECT_EQ(greedy_row_basis(alt).kept_rows, (std::vector<std::size_t>{0, 1}));
}

TEST(HTMatrix, Lines) {
  auto fam = builtin("lines");
  auto m = ht_matrix(fam, rational_points({{0, -1}, {-1, 0}}));
  const Matrix<Rational> expected = {{0, -1, 1}, {-1, 0, 1}};
  EXPECT_EQ(m.rows, expected);
  EXPECT_EQ(nu_best(m), 2);
  EXPECT_EQ(nu_best_prime(fam), 2);
}

TEST(HTMatrix, LametSeventeenPointsRankTwo) {
  auto fam = builtin("lamet", 4);
  auto pts = lamet_points(17);
  for (const auto& p : pts) ASSERT_EQ(eval_curve(fam, std::vector<Rational>{2, 1}, p), 0);
  auto m = ht_matrix(fam, pts);
  EXPECT_EQ(m.nu(), 17u);
  EXPECT_EQ(nu_best(m), 2);
  EXPECT_EQ(nu_best_prime(fam), 2);
  EXPECT_EQ(nu_opt(fam), 17);
}

TEST(HTMatrix, SinglePointHasNonzeroRow) {
  for (const auto& name : builtin_names()) {
    auto fam = builtin(name);
    auto m = ht_matrix(fam, std::vector<ImagePoint>{{0.7, -1.3}});
    ASSERT_EQ(m.nu(), 1u);
    EXPECT_TRUE(std::any_of(m.rows[0].begin(), m.rows[0].end(), [](double v) { return v != 0; }));
    EXPECT_EQ(nu_best(m), 1);
  }
}

TEST(HTMatrix, DegeneratePointIsNamed) {
  auto fam = builtin("descartes_folium");
  try {
    ht_matrix(fam, std::vector<ImagePoint>{{1.0, 2.0}, {0.5, 0.5}, {0.0, 0.0}});
    FAIL() << "expected degenerate_point_error";
  } catch (const degenerate_point_error& e) {
    EXPECT_EQ(e.point_index, 2u);
  }
}

TEST(HTMatrix, PointOutsideInvarianceDegreeSetRejected) {
  // Ex0 at x = 0: the A^2 coefficient vanishes and the transform drops to degree 1.
  auto fam = builtin("conic_ex0");
  try {
    ht_matrix(fam, rational_points({{1, 1}, {0, 3}}));
    FAIL() << "expected degenerate_point_error";
  } catch (const degenerate_point_error& e) {
    EXPECT_EQ(e.point_index, 1u);
  }
}

TEST(Rank, GeneratorSelectionTrivialCases) {
  const Matrix<Rational> full = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(greedy_row_basis(full).kept_rows, (std::vector<std::size_t>{0, 1, 2}));
  const Matrix<Rational> dup = {{1, 2, 3}, {1, 2, 3}, {0, 1, 5}};
  EXPECT_EQ(greedy_row_basis(dup).kept_rows, (std::vector<std::size_t>{0, 2}));
}

TEST(Rank, PermutationInvariant) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> v(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix<Rational> m(5, std::vector<Rational>(4));
    for (auto& row : m)
      for (auto& e : row) e = v(gen);
    // plant a dependency
    for (std::size_t c = 0; c < 4; ++c) m[4][c] = m[0][c] * 2 - m[1][c];
    const auto r = matrix_rank(m);
    auto rows = m;
    std::shuffle(rows.begin(), rows.end(), gen);
    EXPECT_EQ(matrix_rank(rows), r);
    std::vector<std::size_t> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), gen);
    Matrix<Rational> cols = m;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t c = 0; c < 4; ++c) cols[i][c] = m[i][perm[c]];
    EXPECT_EQ(matrix_rank(cols), r);
  }
}

TEST(Rank, RationalAndFloatAgree) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> v(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix<Rational> m(4, std::vector<Rational>(5));
    for (auto& row : m)
      for (auto& e : row) e = Rational(v(gen)) / den(gen);
    if (trial % 2 == 0)
      for (std::size_t c = 0; c < 5; ++c) m[3][c] = m[0][c] / 3 + m[2][c] * 5;
    Matrix<double> f(4, std::vector<double>(5));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t c = 0; c < 5; ++c) f[i][c] = to_double(m[i][c]);
    EXPECT_EQ(matrix_rank(m), matrix_rank(f));
  }
}

TEST(HTMatrix, CsvExport) {
  auto fam = builtin("lines");
  auto m = ht_matrix(fam, rational_points({{0, -1}, {-1, 0}}));
  std::ostringstream out;
  write_ht_matrix_csv(out, m, fam.param_names());
  EXPECT_EQ(out.str(), "A,B,C\n0,-1,1\n-1,0,1\n");
}
