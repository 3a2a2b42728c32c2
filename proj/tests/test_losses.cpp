#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "tubekit/checks.hpp"
#include "tubekit/losses.hpp"
#include "tubekit/oracle.hpp"

using namespace tubekit;

namespace {

FrameStack stack_from(const std::vector<std::vector<Vec3>>& frames) {
  FrameStack s(frames.size(), frames.at(0).size());
  for (std::size_t t = 0; t < frames.size(); ++t)
    std::copy(frames[t].begin(), frames[t].end(), s.frame(t).begin());
  return s;
}

}  // namespace

TEST(Chamfer, IdenticalSetsAreZero) {
  CounterRng rng(1);
  const auto pts = checks::random_points(rng, 20);
  const auto r = chamfer_frame(pts, pts);
  EXPECT_EQ(r.loss, 0.0);
  for (const auto& g : r.grad) EXPECT_EQ(g, (Vec3{0, 0, 0}));
}

TEST(Chamfer, SinglePointPair) {
  const std::vector<Vec3> pred{{0, 0, 0}}, gt{{1, 0, 0}};
  const auto r = chamfer_frame(pred, gt);
  EXPECT_EQ(r.loss, 2.0);
  ASSERT_EQ(r.grad.size(), 1u);
  EXPECT_EQ(r.grad[0], (Vec3{-4, 0, 0}));
}

TEST(Chamfer, UnequalSizes) {
  // forward: 1; backward: (1 + 9) / 2.
  const std::vector<Vec3> pred{{0, 0, 0}}, gt{{1, 0, 0}, {3, 0, 0}};
  const auto r = chamfer_frame(pred, gt);
  EXPECT_EQ(r.loss, 6.0);
  EXPECT_EQ(r.grad[0], (Vec3{-2 - 1 - 3, 0, 0}));
}

TEST(Chamfer, MatchesOracleValue) {
  CounterRng rng(2);
  for (int i = 0; i < 300; ++i) {
    const auto pred = checks::random_points(rng, 1 + rng.uniform_index(40));
    const auto gt = checks::random_points(rng, 1 + rng.uniform_index(40));
    ASSERT_NEAR(chamfer_frame(pred, gt).loss, oracle::naive_chamfer(pred, gt), 1e-12);
  }
}

TEST(Chamfer, GradientMatchesFiniteDifferences) {
  CounterRng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto [pred, gt] = checks::tie_free_pair(rng, 6, 9);
    const auto analytic = checks::flatten(chamfer_frame(pred, gt).grad);
    const auto numeric = checks::central_differences(
        checks::flatten(pred),
        [&gt = gt](const std::vector<double>& x) { return oracle::naive_chamfer(checks::unflatten(x), gt); });
    for (std::size_t j = 0; j < analytic.size(); ++j)
      ASSERT_LT(checks::relative_error(analytic[j], numeric[j]), checks::kGradTolerance);
  }
}

TEST(Chamfer, SymmetricAndPermutationInvariant) {
  CounterRng rng(4);
  for (int i = 0; i < 100; ++i) {
    auto a = checks::random_points(rng, 17);
    auto b = checks::random_points(rng, 11);
    const double ab = chamfer_frame(a, b).loss;
    EXPECT_EQ(ab, chamfer_frame(b, a).loss);
    std::reverse(a.begin(), a.end());
    std::rotate(b.begin(), b.begin() + 4, b.end());
    EXPECT_NEAR(chamfer_frame(a, b).loss, ab, 1e-12);
  }
}

TEST(Chamfer, RejectsEmpty) {
  const std::vector<Vec3> one{{0, 0, 0}}, none;
  EXPECT_THROW(chamfer_frame(none, one), InputError);
  EXPECT_THROW(chamfer_frame(one, none), InputError);
}

TEST(Appearance, TwoFrameDecoupledMean) {
  const Vec3 o{0, 0, 0}, x{1, 0, 0};
  const auto pred = stack_from({{o}, {o}});
  const auto gt = stack_from({{o}, {x}});
  const auto r = appearance_loss(pred, gt, ReconMode::kDecoupled);
  EXPECT_EQ(r.loss, 1.0);
  EXPECT_EQ(r.grad.at(0, 0), (Vec3{0, 0, 0}));
  EXPECT_EQ(r.grad.at(1, 0), (Vec3{-2, 0, 0}));
}

TEST(Appearance, SwappedFramesOnlyVisibleWhenDecoupled) {
  CounterRng rng(5);
  const auto f0 = checks::random_points(rng, 16), f1 = checks::random_points(rng, 16);
  const auto gt = stack_from({f0, f1});
  const auto swapped = stack_from({f1, f0});
  EXPECT_EQ(appearance_loss(swapped, gt, ReconMode::kCoupled).loss, 0.0);
  EXPECT_GT(appearance_loss(swapped, gt, ReconMode::kDecoupled).loss, 0.0);
  EXPECT_EQ(appearance_loss(gt, gt, ReconMode::kDecoupled).loss, 0.0);
}

TEST(Appearance, CoupledPoolsFrames) {
  CounterRng rng(6);
  const auto pred = stack_from({checks::random_points(rng, 5), checks::random_points(rng, 5)});
  const auto gt = stack_from({checks::random_points(rng, 5), checks::random_points(rng, 5)});
  const std::vector<Vec3> pa(pred.flat().begin(), pred.flat().end()), ga(gt.flat().begin(), gt.flat().end());
  EXPECT_NEAR(appearance_loss(pred, gt, ReconMode::kCoupled).loss, oracle::naive_chamfer(pa, ga), 1e-12);
}

TEST(Appearance, MiddleFrameIgnoresOtherFrames) {
  CounterRng rng(7);
  const auto mid = checks::random_points(rng, 8);
  const auto pred = stack_from({checks::random_points(rng, 8), mid, checks::random_points(rng, 8)});
  const auto gt = stack_from({checks::random_points(rng, 8), checks::random_points(rng, 8),
                              checks::random_points(rng, 8)});
  const auto r = appearance_loss(pred, gt, ReconMode::kMiddleFrame);
  const std::vector<Vec3> gm(gt.frame(1).begin(), gt.frame(1).end());
  EXPECT_NEAR(r.loss, oracle::naive_chamfer(mid, gm), 1e-12);
  for (std::size_t t : {0u, 2u})
    for (const auto& g : r.grad.frame(t)) EXPECT_EQ(g, (Vec3{0, 0, 0}));
}

TEST(Appearance, ShapeMismatch) {
  EXPECT_THROW(appearance_loss(FrameStack(2, 3), FrameStack(3, 2), ReconMode::kDecoupled), InputError);
  EXPECT_THROW(appearance_loss(FrameStack(), FrameStack(), ReconMode::kCoupled), InputError);
}

TEST(SmoothL1, Values) {
  EXPECT_EQ(smooth_l1(0.5), 0.125);
  EXPECT_EQ(smooth_l1(-2.0), 1.5);
  EXPECT_EQ(smooth_l1(1.0), 0.5);
  EXPECT_EQ(smooth_l1_derivative(0.25), 0.25);
  EXPECT_EQ(smooth_l1_derivative(-3.0), -1.0);
  EXPECT_EQ(smooth_l1_derivative(1.0), 1.0);
}

TEST(SmoothL1, ContinuousAtKnee) {
  for (double s : {1.0, -1.0}) {
    const double below = std::nextafter(s, 0.0);
    EXPECT_LE(std::abs(smooth_l1(below) - smooth_l1(s)), 1e-12);
    EXPECT_LE(std::abs(smooth_l1_derivative(below) - smooth_l1_derivative(s)), 1e-12);
  }
}

TEST(MotionLoss, MeanOverBinsThenRows) {
  Matrix pred(2, 2), gt(2, 2);
  pred(0, 0) = 0.5;
  pred(1, 1) = 3.0;
  // rows: (0.125 + 0) / 2 and (0 + 2.5) / 2
  const auto r = motion_loss(pred, gt);
  EXPECT_EQ(r.loss, (0.0625 + 1.25) / 2.0);
  EXPECT_EQ(r.grad(0, 0), 0.5 / 4.0);
  EXPECT_EQ(r.grad(1, 1), 1.0 / 4.0);
  EXPECT_EQ(r.grad(0, 1), 0.0);
  EXPECT_THROW(motion_loss(Matrix(1, 2), Matrix(2, 1)), InputError);
}

TEST(TotalLoss, SumAndPassThrough) {
  AppearanceResult app{1.0, FrameStack(1, 1)};
  app.grad.at(0, 0) = {0.1, -0.2, 0.3};
  Matrix p(1, 1), g(1, 1);
  p(0, 0) = 0.5;
  const auto motion = motion_loss(p, g);
  const auto rep = total_loss(app, motion);
  EXPECT_EQ(rep.total_loss, 1.125);
  EXPECT_EQ(rep.app_loss, 1.0);
  EXPECT_EQ(rep.motion_loss, 0.125);
  EXPECT_EQ(rep.grad_app, app.grad);
  EXPECT_EQ(rep.grad_motion, motion.grad);
}

TEST(TotalLoss, IdentityOnRandomReports) {
  CounterRng rng(8);
  for (int i = 0; i < 100; ++i) {
    AppearanceResult app{rng.uniform(0, 10), FrameStack(2, 2)};
    for (auto& v : app.grad.flat()) v = checks::random_point(rng);
    MotionLossResult m{rng.uniform(0, 10), Matrix(1, 8)};
    for (auto& v : m.grad.flat()) v = rng.uniform(-1, 1);
    const auto rep = total_loss(app, m);
    ASSERT_EQ(rep.total_loss, app.loss + m.loss);
    ASSERT_EQ(rep.grad_app, app.grad);
    ASSERT_EQ(rep.grad_motion, m.grad);
  }
}

TEST(TotalLoss, WeightScalesMotionOnly) {
  AppearanceResult app{1.0, FrameStack(1, 1)};
  MotionLossResult m{0.5, Matrix(1, 2)};
  m.grad(0, 1) = 0.25;
  const auto rep = total_loss(app, m, 2.0);
  EXPECT_EQ(rep.total_loss, 2.0);
  EXPECT_EQ(rep.grad_motion(0, 1), 0.5);
  EXPECT_EQ(rep.motion_loss, 0.5);
}

TEST(TotalLoss, RejectsNonFinite) {
  AppearanceResult app{std::numeric_limits<double>::quiet_NaN(), FrameStack(1, 1)};
  EXPECT_THROW(total_loss(app, MotionLossResult{0.0, Matrix(1, 1)}), InputError);
  AppearanceResult ok{0.0, FrameStack(1, 1)};
  EXPECT_THROW(total_loss(ok, MotionLossResult{std::numeric_limits<double>::infinity(), Matrix(1, 1)}),
               InputError);
}

TEST(GradCheck, SuitePasses) {
  const auto rep = checks::run_gradcheck(100, 17);
  EXPECT_TRUE(rep.passed()) << "max rel error " << rep.max_rel_error();
  EXPECT_LT(rep.chamfer_max_rel_error, checks::kGradTolerance);
  EXPECT_LT(rep.appearance_max_rel_error, checks::kGradTolerance);
  EXPECT_LT(rep.smooth_l1_max_rel_error, checks::kGradTolerance);
}
