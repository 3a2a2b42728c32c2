#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tubekit/checks.hpp"
#include "tubekit/oracle.hpp"

using namespace tubekit;

TEST(OracleFps, SquareCornersTieToLowestIndex) {
  const Frame square{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}};
  EXPECT_EQ(oracle::naive_fps(square, 4, 0), (std::vector<std::uint32_t>{0, 3, 1, 2}));
  EXPECT_EQ(oracle::naive_fps(square, 2, 1), (std::vector<std::uint32_t>{1, 2}));
}

TEST(OracleFps, Errors) {
  const Frame f{{{0, 0, 0}}};
  EXPECT_THROW(oracle::naive_fps(f, 0, 0), RangeError);
  EXPECT_THROW(oracle::naive_fps(f, 2, 0), RangeError);
  EXPECT_THROW(oracle::naive_fps(f, 1, 1), RangeError);
}

TEST(OracleChamfer, HandComputed) {
  EXPECT_EQ(oracle::naive_chamfer({{0, 0, 0}}, {{1, 0, 0}, {3, 0, 0}}), 6.0);
  EXPECT_EQ(oracle::naive_chamfer({{1, 2, 3}}, {{1, 2, 3}}), 0.0);
}

TEST(OracleCd, PlanarQuadrantExample) {
  // Frame 0: zero offset (1/4 to every bin). Frame 1: a point at 255
  // degrees, 30 degrees from bin 3 (225) and 60 from bin 2 (315).
  PointTube tube;
  tube.local_points = FrameStack(2, 1);
  const double a = 255.0 * std::numbers::pi / 180.0;
  tube.local_points.at(1, 0) = {std::cos(a), std::sin(a), 0.0};
  const auto cd = oracle::naive_cd(tube, DirectionCodebook::quadrants(), true, 1);
  ASSERT_EQ(cd.rows(), 1u);
  EXPECT_NEAR(cd(0, 0), -0.25, 1e-12);
  EXPECT_NEAR(cd(0, 1), -0.25, 1e-12);
  EXPECT_NEAR(cd(0, 2), 1.0 / 3.0 - 0.25, 1e-12);
  EXPECT_NEAR(cd(0, 3), 2.0 / 3.0 - 0.25, 1e-12);

  const auto hard = oracle::naive_cd(tube, DirectionCodebook::quadrants(), false, 1);
  EXPECT_EQ(hard(0, 3), 0.75);
  EXPECT_EQ(hard(0, 2), -0.25);
}

TEST(OracleCd, StrideOutOfRange) {
  PointTube tube;
  tube.local_points = FrameStack(2, 1);
  EXPECT_THROW(oracle::naive_cd(tube, DirectionCodebook::octants(), true, 2), RangeError);
}

TEST(Verify, SuitePasses) {
  const auto rep = checks::run_verify(300, 5);
  EXPECT_EQ(rep.fps_mismatches, 0u);
  EXPECT_EQ(rep.chamfer_mismatches, 0u);
  EXPECT_EQ(rep.cd_mismatches, 0u) << "max cd error " << rep.cd_max_abs_error;
  EXPECT_TRUE(rep.passed());
}
