#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "hough/builtins.hpp"
#include "hough/synthdata.hpp"

using namespace hough;

namespace {

const char* const kBenchmarkFamilies[] = {"descartes_folium", "elliptic2", "quartic_triple",
                                 "quartic_tacnode"};

// Smallest N2 with 100 * N2 >= x * (n1 + N2), in integers.
std::size_t background_oracle(std::size_t n1, std::size_t x) {
  std::size_t n2 = 0;
  while (100 * n2 < x * (n1 + n2)) ++n2;
  return n2;
}

}  // namespace

TEST(Rng, MatchesPublishedMt19937_64Sequence) {
  Rng rng;  // default seed 5489
  std::uint64_t v = 0;
  for (int k = 0; k < 10000; ++k) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const double x = a.uniform(), y = b.uniform();
    EXPECT_EQ(x, y);
    differs = differs || x != c.uniform();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformStaysInRange) {
  Rng rng(3);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.below(7), 7u);
  }
}

TEST(Rng, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(1, s));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(BackgroundCount, ReproducesNoiseMixTable) {
  struct Row {
    std::size_t n1;
    std::size_t n2[5];
  };
  const double levels[5] = {99, 95, 90, 85, 80};
  const Row rows[] = {{9, {891, 171, 81, 51, 36}},
                      {14, {1386, 266, 126, 80, 56}},
                      {13, {1287, 247, 117, 74, 52}}};
  for (const auto& r : rows)
    for (int k = 0; k < 5; ++k)
      EXPECT_EQ(background_count(r.n1, levels[k]), r.n2[k]) << r.n1 << " at " << levels[k];
}

TEST(BackgroundCount, ReproducesPointIncreaseTable) {
  EXPECT_EQ(background_count(15, 99), 1485u);
  EXPECT_EQ(background_count(20, 99), 1980u);
  EXPECT_EQ(background_count(25, 99), 2475u);
}

TEST(BackgroundCount, AgreesWithIntegerOracle) {
  for (std::size_t n1 = 1; n1 <= 40; ++n1)
    for (std::size_t x = 0; x < 100; ++x)
      ASSERT_EQ(background_count(n1, static_cast<double>(x)), background_oracle(n1, x))
          << n1 << ' ' << x;
}

TEST(BackgroundCount, RejectsOutOfRange) {
  EXPECT_THROW(background_count(9, 100), argument_error);
  EXPECT_THROW(background_count(9, -1), argument_error);
  EXPECT_EQ(background_count(9, 0), 0u);
}

TEST(Sampling, PointsLieOnTheCurve) {
  for (const char* name : {"descartes_folium", "elliptic2", "quartic_triple", "quartic_tacnode",
                           "lamet", "conic_pencil"}) {
    const auto fam = builtin(name);
    const auto lambda = *fam.reference_params();
    Rng rng(11);
    const auto pts = sample_on_curve(fam, lambda, 500, rng);
    ASSERT_EQ(pts.size(), 500u);
    for (const auto& p : pts) {
      ASSERT_TRUE(p.finite());
      ASSERT_LE(std::abs(eval_curve(fam, lambda, p)), kOnCurveTolerance * eval_scale(fam, lambda, p))
          << name << " at (" << p.x << ", " << p.y << ")";
      ASSERT_FALSE(is_affine_base_point(fam, p)) << name;
    }
  }
}

TEST(Sampling, Deterministic) {
  for (const char* name : kBenchmarkFamilies) {
    const auto fam = builtin(name);
    Rng a(5), b(5);
    EXPECT_EQ(sample_on_curve(fam, *fam.reference_params(), 50, a),
              sample_on_curve(fam, *fam.reference_params(), 50, b))
        << name;
  }
}

TEST(Sampling, RespectsClipBox) {
  for (const char* name : kBenchmarkFamilies) {
    const auto fam = builtin(name);
    CurveSampler sampler(fam, *fam.reference_params());
    ASSERT_TRUE(sampler.extent()) << name;
    Rng rng(8);
    for (const auto& p : sampler.draw(300, rng)) ASSERT_TRUE(sampler.extent()->contains(p)) << name;
  }
}

TEST(Sampling, FoliumCoversLoopAndTails) {
  const auto fam = builtin("descartes_folium");
  Rng rng(2);
  int loop = 0, tail = 0;
  for (const auto& p : sample_on_curve(fam, {3, 1}, 400, rng)) (p.x > 0 && p.y > 0 ? loop : tail)++;
  EXPECT_GT(loop, 50);
  EXPECT_GT(tail, 50);
}

TEST(Sampling, TacnodeUsesBothBranches) {
  const auto fam = builtin("quartic_tacnode");
  Rng rng(4);
  int upper = 0, lower = 0;
  // For 2 < x < 4.75 the upper branch stays above y = 8.6 and the lower below 4.2.
  for (const auto& p : sample_on_curve(fam, {1, 8}, 400, rng))
    if (p.x > 2 && p.x < 4.75) (p.y > 6 ? upper : lower)++;
  EXPECT_GT(upper, 10);
  EXPECT_GT(lower, 10);
}

TEST(Sampling, EmptyWindowIsSamplingError) {
  const auto fam = builtin("elliptic2");
  SamplingWindow w{"elliptic", {-5, 5}, Window({100, 101}, {100, 101})};
  CurveSampler sampler(fam, {-4, 7}, w);
  Rng rng(1);
  EXPECT_THROW(sampler.draw(rng), sampling_error);
}

TEST(Sampling, BadArguments) {
  const auto fam = builtin("descartes_folium");
  Rng rng(1);
  EXPECT_THROW(sample_on_curve(fam, {3, 1}, 0, rng), argument_error);
  EXPECT_THROW(sample_on_curve(fam, {3}, 5, rng), argument_error);
  EXPECT_THROW(sample_on_curve(fam, {NAN, 1}, 5, rng), argument_error);
}

TEST(NoiseWindow, DefaultsToClipBoxOrPaddedExtent) {
  const auto folium = builtin("descartes_folium");
  const auto w = default_noise_window(folium, {3, 1});
  EXPECT_EQ(w.x_range, (Interval{-5, 5}));
  EXPECT_EQ(w.y_range, (Interval{-5, 5}));

  const auto triple = builtin("quartic_triple");
  const auto tw = default_noise_window(triple, {0.2, 0.5});
  Rng rng(6);
  for (const auto& p : sample_on_curve(triple, {0.2, 0.5}, 300, rng)) ASSERT_TRUE(tw.contains(p));
  // The curve reaches y = 0 at the triple point, so the padded frame extends below it.
  EXPECT_LT(tw.y_range.lo, 0.0);
  EXPECT_GT(tw.y_range.lo, -0.1);
}

TEST(UniformBackground, InsideWindowAndDeterministic) {
  const Window w({-2, 3}, {10, 11});
  Rng a(9), b(9);
  const auto pts = uniform_background(w, 1000, a);
  EXPECT_EQ(pts, uniform_background(w, 1000, b));
  double mx = 0;
  for (const auto& p : pts) {
    ASSERT_TRUE(w.contains(p));
    mx += p.x;
  }
  EXPECT_NEAR(mx / 1000, 0.5, 0.15);
}

TEST(GaussianPerturb, ZeroSigmaIsIdentity) {
  const std::vector<ImagePoint> pts{{1, 2}, {-3, 0.5}};
  Rng rng(1);
  EXPECT_EQ(gaussian_perturb(pts, 0.0, rng), pts);
}

TEST(GaussianPerturb, SampleStddevMatchesSigma) {
  std::vector<ImagePoint> pts(10000, ImagePoint{1.0, -2.0});
  Rng rng(17);
  const auto out = gaussian_perturb(pts, 0.02, rng);
  double s1 = 0, s2 = 0;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (double d : {out[k].x - pts[k].x, out[k].y - pts[k].y}) {
      s1 += d;
      s2 += d * d;
    }
  const double n = 2.0 * out.size();
  const double sd = std::sqrt(s2 / n - (s1 / n) * (s1 / n));
  EXPECT_GE(sd, 0.019);
  EXPECT_LE(sd, 0.021);
  EXPECT_NEAR(s1 / n, 0.0, 0.001);
}

TEST(GaussianPerturb, PerturbedPointsLeaveTheCurve) {
  const auto fam = builtin("descartes_folium");
  Rng rng(21);
  const auto on = sample_on_curve(fam, {3, 1}, 200, rng);
  const auto off = gaussian_perturb(on, 0.01, rng);
  int violating = 0;
  for (const auto& p : off)
    if (std::abs(eval_curve(fam, {3, 1}, p)) > kOnCurveTolerance * eval_scale(fam, {3, 1}, p))
      ++violating;
  EXPECT_EQ(violating, 200);
}

TEST(GaussianPerturb, NegativeSigmaRejected) {
  Rng rng(1);
  EXPECT_THROW(gaussian_perturb({{0, 0}}, -0.1, rng), argument_error);
}

TEST(PointsCsv, RoundTrip) {
  LabeledPoints set;
  set.add({{0.1, -2.5}, {1e-7, 3}}, PointLabel::Curve);
  set.add({{4.25, 0.3333333333333333}}, PointLabel::Noise);
  std::stringstream s;
  write_points_csv(s, set);
  EXPECT_EQ(s.str().substr(0, 10), "x,y,label\n");
  const auto back = read_points_csv(s);
  EXPECT_EQ(back.points, set.points);
  EXPECT_EQ(back.labels, set.labels);
}

TEST(PointsCsv, HeaderOptionalAndLabelDefaultsToCurve) {
  std::istringstream in("1,2\n3.5,-1,noise\n");
  const auto set = read_points_csv(in);
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.labels[0], PointLabel::Curve);
  EXPECT_EQ(set.labels[1], PointLabel::Noise);
}

TEST(PointsCsv, ExactReadKeepsRationals) {
  std::istringstream in("x,y,label\n1/2,-0.25,curve\n");
  const auto pts = read_exact_points_csv(in);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].x, Surd(Rational(1, 2)));
  EXPECT_EQ(pts[0].y, Surd(Rational(-1, 4)));
}

TEST(PointsCsv, Malformed) {
  std::istringstream a("x,y\n1\n");
  EXPECT_THROW(read_points_csv(a), argument_error);
  std::istringstream b("1,2,edge\n");
  EXPECT_THROW(read_points_csv(b), argument_error);
}
