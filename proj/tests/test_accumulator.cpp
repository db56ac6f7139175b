#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hough/accumulator.hpp"
#include "hough/builtins.hpp"
#include "hough/synthdata.hpp"
#include "property_cases.hpp"

using namespace hough;
using props::kBenchmarkFamilies;
namespace {

std::size_t voted_cells(const AccumulatorGrid& g) {
  return static_cast<std::size_t>(
      std::count_if(g.counts().begin(), g.counts().end(), [](std::uint32_t c) { return c > 0; }));
}

std::vector<ImagePoint> noisy_set(const FamilyDefinition& fam, std::uint64_t seed) {
  const auto lambda = *fam.reference_params();
  Rng rng(seed);
  auto pts = sample_on_curve(fam, lambda, 20, rng);
  const auto noise = uniform_background(default_noise_window(fam, lambda), 200, rng);
  pts.insert(pts.end(), noise.begin(), noise.end());
  return pts;
}

}  // namespace

TEST(Grid, ReproducesDiscretizationTable) {
  const std::pair<int, int> expected[] = {{525, 525}, {1000, 1000}, {1000, 490}, {1000, 1000}};
  for (int k = 0; k < 4; ++k) {
    const auto g = build_grid(builtin(kBenchmarkFamilies[k]));
    EXPECT_EQ(g.n_a, expected[k].first) << kBenchmarkFamilies[k];
    EXPECT_EQ(g.n_b, expected[k].second) << kBenchmarkFamilies[k];
  }
}

TEST(Grid, FloorFormula) {
  const auto g = build_grid(0, 1, 0.5, 0, 1, 0.5);
  EXPECT_EQ(g.n_a, 2);
  EXPECT_EQ(g.n_b, 2);
  EXPECT_EQ(build_grid(0, 1, 0.3, 0, 1, 0.4).n_a, 3);
  EXPECT_EQ(build_grid(0, 1, 0.3, 0, 1, 0.4).n_b, 2);
}

TEST(Grid, InvalidBounds) {
  EXPECT_THROW(build_grid(0, 1, 0, 0, 1, 0.1), argument_error);
  EXPECT_THROW(build_grid(0, 1, 0.1, 0, 1, -0.1), argument_error);
  EXPECT_THROW(build_grid(1, 1, 0.1, 0, 1, 0.1), argument_error);
  EXPECT_THROW(build_grid(0, 1, 2, 0, 1, 0.1), argument_error);
  EXPECT_THROW(build_grid(0, INFINITY, 0.1, 0, 1, 0.1), argument_error);
  EXPECT_THROW(build_grid(builtin("elliptic3")), unsupported_dimension_error);
}

TEST(Grid, ReferenceParametersSitAtCellCenters) {
  for (const char* name : kBenchmarkFamilies) {
    const auto fam = builtin(name);
    const auto g = build_grid(fam);
    const auto lambda = *fam.reference_params();
    const auto cell = g.cell_of(lambda);
    ASSERT_TRUE(cell) << name;
    const auto c = g.center(cell->first, cell->second);
    EXPECT_NEAR(c[0], lambda[0], 1e-9) << name;
    EXPECT_NEAR(c[1], lambda[1], 1e-9) << name;
  }
}

TEST(Grid, CellOfMatchesNearestNode) {
  const auto g = build_grid(-1, 1, 0.1, 2, 3, 0.05);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> ua(-1.04, 0.94), ub(1.976, 2.974);
  for (int k = 0; k < 1000; ++k) {
    const double a = ua(gen), b = ub(gen);
    const auto cell = g.cell_of({a, b});
    ASSERT_TRUE(cell);
    EXPECT_EQ(cell->first, std::lround((a + 1) / 0.1));
    EXPECT_EQ(cell->second, std::lround((b - 2) / 0.05));
    const auto c = g.center(cell->first, cell->second);
    EXPECT_LE(std::abs(c[0] - a), 0.05 + 1e-12);
    EXPECT_LE(std::abs(c[1] - b), 0.025 + 1e-12);
  }
  EXPECT_FALSE(g.cell_of({-1.06, 2.5}));
  EXPECT_FALSE(g.cell_of({0, 3.1}));
  EXPECT_THROW((void)g.cell_of({0, 1, 2}), argument_error);
}

TEST(Vote, FoliumPointVotesTrueCell) {
  const auto fam = builtin("descartes_folium");
  const auto g = build_grid(fam);
  // (3/2 a, 3/2 a) is the loop tip of x^3 + y^3 - 3 a x y = 0.
  for (auto mode : {VoteMode::ColumnCenter, VoteMode::CrossingFill}) {
    AccumulatorGrid acc(g);
    const auto r = vote(acc, fam, {4.5, 4.5}, mode);
    EXPECT_FALSE(r.degenerate);
    const auto cell = *g.cell_of({3, 1});
    EXPECT_EQ(acc.at(cell.first, cell.second), 1u) << vote_mode_name(mode);
  }
}

TEST(Vote, EllipticPointOnAxisGivesHorizontalLine) {
  // y^2 = x^3 + A x + B through (0, 1) forces B = 1 for every A.
  const auto fam = builtin("elliptic2");
  const auto g = build_grid(fam);
  const int row = static_cast<int>(g.b_index(1.0));
  for (auto mode : {VoteMode::ColumnCenter, VoteMode::CrossingFill}) {
    AccumulatorGrid acc(g);
    const auto r = vote(acc, fam, {0, 1}, mode);
    EXPECT_EQ(r.cells, static_cast<std::size_t>(g.n_a)) << vote_mode_name(mode);
    for (int i = 0; i < g.n_a; ++i) ASSERT_EQ(acc.at(i, row), 1u);
    EXPECT_EQ(voted_cells(acc), static_cast<std::size_t>(g.n_a));
  }
}

TEST(Vote, AtMostOneVotePerCell) {
  for (const char* name : kBenchmarkFamilies) {
    const auto fam = builtin(name);
    const auto g = build_grid(fam);
    for (const auto& p : noisy_set(fam, 3)) {
      for (auto mode : {VoteMode::ColumnCenter, VoteMode::CrossingFill}) {
        AccumulatorGrid acc(g);
        const auto r = vote(acc, fam, p, mode);
        ASSERT_LE(*std::max_element(acc.counts().begin(), acc.counts().end()), 1u) << name;
        ASSERT_EQ(voted_cells(acc), r.cells) << name;
      }
    }
  }
}

TEST(Vote, ColumnVotesAreASubsetOfCrossingFill) {
  for (const char* name : kBenchmarkFamilies) {
    const auto fam = builtin(name);
    const auto g = build_grid(fam);
    for (const auto& p : noisy_set(fam, 4)) {
      AccumulatorGrid col(g), cross(g);
      vote(col, fam, p, VoteMode::ColumnCenter);
      vote(cross, fam, p, VoteMode::CrossingFill);
      for (std::size_t k = 0; k < col.counts().size(); ++k)
        if (col.counts()[k]) ASSERT_EQ(cross.counts()[k], 1u) << name << " at (" << p.x << ", " << p.y << ")";
    }
  }
}

TEST(Vote, OneCellPerColumnInColumnMode) {
  const auto fam = builtin("elliptic2");
  const auto g = build_grid(fam);
  AccumulatorGrid acc(g);
  vote(acc, fam, {1.5, 2.0}, VoteMode::ColumnCenter);
  for (int i = 0; i < g.n_a; ++i) {
    int n = 0;
    for (int j = 0; j < g.n_b; ++j) n += static_cast<int>(acc.at(i, j));
    ASSERT_LE(n, 1);
  }
}

TEST(Vote, BasePointIsDegenerate) {
  const auto fam = builtin("descartes_folium");
  AccumulatorGrid acc(build_grid(fam));
  const auto r = vote(acc, fam, {0, 0});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.cells, 0u);
  EXPECT_EQ(voted_cells(acc), 0u);
}

TEST(Accumulate, SkipsDegeneratePointsAndCounts) {
  const auto fam = builtin("descartes_folium");
  AccumulatorGrid acc(build_grid(fam));
  const auto stats = accumulate(acc, fam, {{0, 0}, {4.5, 4.5}, {4.5, 4.5}});
  EXPECT_EQ(stats.points, 3u);
  EXPECT_EQ(stats.degenerate_skipped, 1u);
  const auto cell = *acc.spec().cell_of({3, 1});
  EXPECT_EQ(acc.at(cell.first, cell.second), 2u);
}

TEST(Accumulate, PermutationInvariant) {
  std::mt19937_64 gen(7);
  for (const char* name : kBenchmarkFamilies) {
    const auto fam = builtin(name);
    const auto g = build_grid(fam);
    auto pts = noisy_set(fam, 5);
    for (auto mode : {VoteMode::ColumnCenter, VoteMode::CrossingFill}) {
      AccumulatorGrid ref(g);
      accumulate(ref, fam, pts, {mode, 1});
      for (int rep = 0; rep < 3; ++rep) {
        std::shuffle(pts.begin(), pts.end(), gen);
        AccumulatorGrid acc(g);
        accumulate(acc, fam, pts, {mode, 1});
        ASSERT_TRUE(acc == ref) << name;
      }
    }
  }
}

TEST(Accumulate, ParallelEqualsSerial) {
  for (const char* name : kBenchmarkFamilies) {
    const auto fam = builtin(name);
    const auto g = build_grid(fam);
    const auto pts = noisy_set(fam, 6);
    for (auto mode : {VoteMode::ColumnCenter, VoteMode::CrossingFill}) {
      AccumulatorGrid serial(g);
      accumulate(serial, fam, pts, {mode, 1});
      for (unsigned threads : {2u, 3u, 8u}) {
        AccumulatorGrid par(g);
        accumulate(par, fam, pts, {mode, threads});
        ASSERT_TRUE(par == serial) << name << " threads " << threads;
      }
    }
  }
}

TEST(Accumulate, SumOfSingleVotes) {
  const auto fam = builtin("quartic_tacnode");
  const auto g = build_grid(fam);
  const auto pts = noisy_set(fam, 9);
  AccumulatorGrid total(g), sum(g);
  accumulate(total, fam, pts);
  for (const auto& p : pts) {
    AccumulatorGrid one(g);
    vote(one, fam, p);
    sum += one;
  }
  EXPECT_TRUE(total == sum);
}

TEST(Accumulate, RequiresTwoParameters) {
  const auto fam = builtin("elliptic3");
  AccumulatorGrid acc(build_grid(0, 1, 0.1, 0, 1, 0.1));
  EXPECT_THROW(accumulate(acc, fam, {{1, 1}}), unsupported_dimension_error);
}

TEST(Accumulate, MergingDifferentGridsFails) {
  AccumulatorGrid a(build_grid(0, 1, 0.1, 0, 1, 0.1)), b(build_grid(0, 1, 0.2, 0, 1, 0.1));
  EXPECT_THROW(a += b, argument_error);
}

TEST(Argmax, TiesGoToSmallestRowMajorIndex) {
  AccumulatorGrid acc(build_grid(0, 1, 0.1, 0, 1, 0.1));
  acc.counts()[acc.index(3, 2)] = 4;
  acc.counts()[acc.index(0, 5)] = 4;
  acc.counts()[acc.index(7, 1)] = 3;
  const auto r = argmax(acc);
  EXPECT_EQ(r.i, 0);
  EXPECT_EQ(r.j, 5);
  EXPECT_EQ(r.count, 4u);
  EXPECT_NEAR(r.center[1], 0.5, 1e-12);
}

TEST(Argmax, EmptyGridIsNoSignal) {
  AccumulatorGrid acc(build_grid(0, 1, 0.1, 0, 1, 0.1));
  EXPECT_THROW(argmax(acc), no_signal_error);
}

TEST(AccumulatorCsv, OneLinePerColumn) {
  AccumulatorGrid acc(build_grid(0, 1, 0.5, 0, 1, 0.25));
  acc.counts()[acc.index(1, 3)] = 7;
  std::ostringstream s;
  write_accumulator_csv(s, acc);
  EXPECT_EQ(s.str(), "0,0,0,0\n0,0,0,7\n");
}

TEST(VoteProperty, ColumnVotesHitTrueCellAtGridNodes) {
  std::mt19937_64 gen(2024);
  for (int k = 0; k < 500; ++k) {
    const auto c = props::random_on_curve_case(gen, true);
    ASSERT_TRUE(props::vote_hits_true_cell(c, VoteMode::ColumnCenter))
        << c.family << " lambda (" << c.lambda[0] << ", " << c.lambda[1] << ") p (" << c.point.x
        << ", " << c.point.y << ")";
  }
}

TEST(VoteProperty, CrossingFillHitsTrueCellAnywhere) {
  std::mt19937_64 gen(2025);
  for (int k = 0; k < 500; ++k) {
    const auto c = props::random_on_curve_case(gen, false);
    ASSERT_TRUE(props::vote_hits_true_cell(c, VoteMode::CrossingFill))
        << c.family << " lambda (" << c.lambda[0] << ", " << c.lambda[1] << ") p (" << c.point.x
        << ", " << c.point.y << ")";
  }
}
