#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "tubekit/checks.hpp"
#include "tubekit/motion_targets.hpp"
#include "tubekit/oracle.hpp"

using namespace tubekit;

namespace {

PointTube tube_from_frames(const std::vector<std::vector<Vec3>>& frames) {
  PointTube t;
  t.local_points = FrameStack(frames.size(), frames.at(0).size());
  t.source_indices.assign(frames.size() * frames[0].size(), 0);
  for (std::size_t f = 0; f < frames.size(); ++f)
    for (std::size_t i = 0; i < frames[f].size(); ++i) t.local_points.at(f, i) = frames[f][i];
  return t;
}

PointTube reversed(const PointTube& t) {
  PointTube r = t;
  const std::size_t l = t.frames();
  for (std::size_t f = 0; f < l; ++f) {
    const auto src = t.local_points.frame(l - 1 - f);
    std::copy(src.begin(), src.end(), r.local_points.frame(f).begin());
  }
  return r;
}

}  // namespace

TEST(CardinalityHistogram, AllAlongOneCenter) {
  std::vector<Vec3> pts(32, Vec3{0.1, 0.1, 0.1});
  const auto h = cardinality_histogram(pts, DirectionCodebook::octants(), true);
  EXPECT_EQ(h.bins[0], 32.0);
  for (std::size_t b = 1; b < 8; ++b) EXPECT_EQ(h.bins[b], 0.0);
}

TEST(CardinalityHistogram, OnePointPerOctantCenter) {
  const auto book = DirectionCodebook::octants();
  const auto h = cardinality_histogram(book.centers(), book, true);
  for (double b : h.bins) EXPECT_EQ(b, 1.0);
}

TEST(CardinalityHistogram, ZeroOffsetsSpreadUniformly) {
  std::vector<Vec3> pts(3, Vec3{0, 0, 0});
  const auto h = cardinality_histogram(pts, DirectionCodebook::quadrants(), false);
  for (double b : h.bins) EXPECT_EQ(b, 0.75);
}

TEST(CardinalityHistogram, MassIsConserved) {
  CounterRng rng(5);
  for (std::size_t k : {4u, 8u, 16u}) {
    const auto book = DirectionCodebook::standard(k);
    for (int i = 0; i < 200; ++i) {
      const auto tube = checks::random_tube(rng, 1, 32);
      for (bool interp : {true, false}) {
        const auto h = cardinality_histogram(tube.local_points.frame(0), book, interp);
        ASSERT_NEAR(h.total(), 32.0, 1e-9);
        ASSERT_TRUE(std::all_of(h.bins.begin(), h.bins.end(), [](double b) { return b >= 0.0; }));
      }
    }
  }
}

TEST(CardinalityHistogram, HardBinsAreIntegersForNonZeroOffsets) {
  CounterRng rng(6);
  std::vector<Vec3> pts = checks::random_points(rng, 32);
  const auto h = cardinality_histogram(pts, DirectionCodebook::octants(), false);
  for (double b : h.bins) EXPECT_EQ(b, std::round(b));
}

TEST(CardinalityHistogram, AntipodalMirrorPermutesBins) {
  const auto book = DirectionCodebook::octants();
  CounterRng rng(8);
  for (int i = 0; i < 200; ++i) {
    auto pts = checks::random_points(rng, 32);
    auto mirrored = pts;
    for (auto& p : mirrored) p = {-p[0], -p[1], -p[2]};
    const auto h = cardinality_histogram(pts, book, true);
    const auto m = cardinality_histogram(mirrored, book, true);
    for (std::size_t b = 0; b < 8; ++b) ASSERT_EQ(m.bins[b ^ 7u], h.bins[b]);
  }
}

TEST(MotionTarget, StaticTubeIsZero) {
  std::vector<Vec3> frame = {{0.1, 0, 0}, {0, -0.2, 0.1}, {0, 0, 0}, {-0.1, 0.1, 0.1}};
  const auto tube = tube_from_frames({frame, frame, frame});
  const auto m = compute_motion_target(tube, DirectionCodebook::octants(), true, 1);
  ASSERT_EQ(m.cd.rows(), 2u);
  ASSERT_EQ(m.cd.cols(), 8u);
  for (double v : m.cd.flat()) EXPECT_EQ(v, 0.0);
}

TEST(MotionTarget, OutflowFromNegativeOctantToPositive) {
  // Bin 7 is (-,-,-), bin 0 is (+,+,+). Over three frames, points migrate
  // one by one from the negative to the positive octant center.
  const Vec3 neg{-0.1, -0.1, -0.1}, pos{0.1, 0.1, 0.1};
  const auto tube = tube_from_frames({{neg, neg, neg, neg}, {pos, neg, neg, neg}, {pos, pos, pos, neg}});
  const auto book = DirectionCodebook::octants();
  const auto m = compute_motion_target(tube, book, true, 1);
  const auto want = oracle::naive_cd(tube, book, true, 1);
  for (std::size_t i = 0; i < want.flat().size(); ++i) EXPECT_NEAR(m.cd.flat()[i], want.flat()[i], 1e-9);
  EXPECT_EQ(m.cd(0, 0), 1.0);
  EXPECT_EQ(m.cd(0, 7), -1.0);
  EXPECT_EQ(m.cd(1, 0), 2.0);
  EXPECT_EQ(m.cd(1, 7), -2.0);
}

TEST(MotionTarget, RowsSumToZero) {
  CounterRng rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto tube = checks::random_tube(rng, 3, 32);
    const auto m = compute_motion_target(tube, DirectionCodebook::octants(), true, 1);
    for (std::size_t r = 0; r < m.cd.rows(); ++r) {
      double s = 0.0;
      for (double v : m.cd.row(r)) s += v;
      ASSERT_NEAR(s, 0.0, 1e-9);
    }
  }
}

TEST(MotionTarget, StrideRange) {
  CounterRng rng(1);
  const auto tube = checks::random_tube(rng, 3, 4);
  const auto book = DirectionCodebook::octants();
  EXPECT_THROW(compute_motion_target(tube, book, true, 0), RangeError);
  EXPECT_THROW(compute_motion_target(tube, book, true, 3), RangeError);
  EXPECT_EQ(compute_motion_target(tube, book, true, 2).cd.rows(), 1u);
}

TEST(MotionTarget, ReversalNegatesAndReversesRows) {
  CounterRng rng(10);
  for (std::size_t k : {4u, 8u, 16u}) {
    const auto book = DirectionCodebook::standard(k);
    for (int i = 0; i < 100; ++i) {
      const std::size_t l = 2 + rng.uniform_index(4);
      const auto tube = checks::random_tube(rng, l, 32);
      const std::size_t stride = 1 + rng.uniform_index(l - 1);
      const auto fwd = compute_motion_target(tube, book, true, stride).cd;
      const auto bwd = compute_motion_target(reversed(tube), book, true, stride).cd;
      for (std::size_t r = 0; r < fwd.rows(); ++r)
        for (std::size_t b = 0; b < k; ++b) ASSERT_EQ(bwd(fwd.rows() - 1 - r, b), -fwd(r, b));
    }
  }
}

TEST(MotionTarget, StrideTwoIsSumOfStrideOneRows) {
  CounterRng rng(11);
  const auto book = DirectionCodebook::octants();
  for (int i = 0; i < 200; ++i) {
    const auto tube = checks::random_tube(rng, 3, 32);
    for (bool interp : {false, true}) {
      const auto one = compute_motion_target(tube, book, interp, 1).cd;
      const auto two = compute_motion_target(tube, book, interp, 2).cd;
      for (std::size_t b = 0; b < 8; ++b) {
        // Hard counts are small integers, so this is exact; soft weights
        // pick up rounding from summing in a different order.
        if (!interp) ASSERT_EQ(two(0, b), one(0, b) + one(1, b));
        else ASSERT_NEAR(two(0, b), one(0, b) + one(1, b), 1e-12);
      }
    }
  }
}

TEST(MotionTarget, NormalizationDividesByPointsPerFrame) {
  CounterRng rng(12);
  const auto tube = checks::random_tube(rng, 3, 32);
  const auto book = DirectionCodebook::octants();
  const auto raw = compute_motion_target(tube, book, {true, 1, false}).cd;
  const auto norm = compute_motion_target(tube, book, {true, 1, true}).cd;
  for (std::size_t i = 0; i < raw.flat().size(); ++i)
    EXPECT_DOUBLE_EQ(norm.flat()[i], raw.flat()[i] / 32.0);
}

TEST(MotionTarget, TranslationInvariant) {
  // Offsets are point - key point; translating both by a dyadic vector
  // keeps every subtraction exact, so the CD is bit-identical.
  CounterRng rng(13);
  const auto book = DirectionCodebook::octants();
  for (int i = 0; i < 50; ++i) {
    const Vec3 key{std::ldexp(static_cast<double>(rng.uniform_index(1024)), -10), 0.25, -0.5};
    const Vec3 shift{4.0, -2.0, 8.0};
    std::vector<std::vector<Vec3>> a(3), b(3);
    for (std::size_t f = 0; f < 3; ++f)
      for (int p = 0; p < 32; ++p) {
        const Vec3 q{std::ldexp(static_cast<double>(rng.uniform_index(1024)) - 512, -11),
                     std::ldexp(static_cast<double>(rng.uniform_index(1024)) - 512, -11),
                     std::ldexp(static_cast<double>(rng.uniform_index(1024)) - 512, -11)};
        const Vec3 abs = vec::add(key, q);
        a[f].push_back(vec::sub(abs, key));
        b[f].push_back(vec::sub(vec::add(abs, shift), vec::add(key, shift)));
      }
    EXPECT_EQ(compute_motion_target(tube_from_frames(a), book, true, 1).cd,
              compute_motion_target(tube_from_frames(b), book, true, 1).cd);
  }
}
