// tubekit - point tube pretext targets for point cloud videos
// Randomized self-check suites: oracle equivalence and finite-difference
// gradient checks. Used by `tubekit verify`, `tubekit gradcheck` and the
// acceptance tests.

#ifndef TUBEKIT_CHECKS_HPP
#define TUBEKIT_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "tubekit/geometry.hpp"
#include "tubekit/losses.hpp"
#include "tubekit/motion_targets.hpp"
#include "tubekit/oracle.hpp"
#include "tubekit/rng.hpp"

namespace tubekit::checks {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kGradTolerance = 1e-4;
// Denominator floor for relative error, so components that are zero up to
// rounding are compared in absolute terms.
inline constexpr double kRelFloor = 1e-6;
// Instances whose nearest/second-nearest squared distances (or |x| vs the
// smooth L1 knee) are closer than this are resampled.
inline constexpr double kTieGap = 1e-3;
inline constexpr double kChamferTolerance = 1e-12;
inline constexpr double kCdTolerance = 1e-9;

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), kRelFloor});
}

inline Vec3 random_point(CounterRng& rng, double lo = -1.0, double hi = 1.0) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

inline std::vector<Vec3> random_points(CounterRng& rng, std::size_t n, double lo = -1.0,
                                       double hi = 1.0) {
  std::vector<Vec3> v(n);
  for (auto& p : v) p = random_point(rng, lo, hi);
  return v;
}

// Points on a coarse grid so that exact distance ties occur.
inline std::vector<Vec3> random_grid_points(CounterRng& rng, std::size_t n) {
  std::vector<Vec3> v(n);
  for (auto& p : v)
    p = {static_cast<double>(rng.uniform_index(4)), static_cast<double>(rng.uniform_index(4)),
         static_cast<double>(rng.uniform_index(4))};
  return v;
}

// Random tube with `frames` x `points` offsets in the unit ball; roughly
// one offset in 16 is exactly zero.
inline PointTube random_tube(CounterRng& rng, std::size_t frames, std::size_t points) {
  PointTube tube;
  tube.key_point.frame_index = frames / 2;
  tube.local_points = FrameStack(frames, points);
  tube.source_indices.assign(frames * points, 0);
  for (auto& p : tube.local_points.flat()) {
    if (rng.uniform_index(16) == 0) {
      p = {0, 0, 0};
      continue;
    }
    do p = random_point(rng); while (vec::squared_norm(p) >= 1.0);
  }
  return tube;
}

// Smallest gap between the best and second-best squared distance from
// any point of `from` to the points of `to`.
inline double nearest_gap(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  double gap = std::numeric_limits<double>::infinity();
  if (to.size() < 2) return gap;
  for (const auto& a : from) {
    double b1 = std::numeric_limits<double>::infinity(), b2 = b1;
    for (const auto& b : to) {
      const double d = vec::squared_distance(a, b);
      if (d < b1) {
        b2 = b1;
        b1 = d;
      } else if (d < b2) {
        b2 = d;
      }
    }
    gap = std::min(gap, b2 - b1);
  }
  return gap;
}

struct VerifyReport {
  std::size_t trials = 0;
  std::size_t fps_mismatches = 0;
  std::size_t chamfer_mismatches = 0;
  std::size_t cd_mismatches = 0;
  double chamfer_max_abs_error = 0.0;
  double cd_max_abs_error = 0.0;

  bool passed() const noexcept {
    return fps_mismatches == 0 && chamfer_mismatches == 0 && cd_mismatches == 0;
  }
};

// FPS (set equality), Chamfer (1e-12) and CD (1e-9) against the oracle on
// `trials` random instances of at most 64 points each.
inline VerifyReport run_verify(std::size_t trials, std::uint64_t seed) {
  VerifyReport rep;
  rep.trials = trials;
  CounterRng rng(CounterRng::derive_key(seed, {0x7E51F1ULL}));
  for (std::size_t trial = 0; trial < trials; ++trial) {
    {
      const std::size_t n = 1 + rng.uniform_index(64);
      Frame frame{trial % 4 == 3 ? random_grid_points(rng, n) : random_points(rng, n)};
      const std::size_t count = 1 + rng.uniform_index(n);
      const std::size_t first = rng.uniform_index(n);
      auto got = farthest_point_sample_from(frame, count, first);
      auto want = oracle::naive_fps(frame, count, first);
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      if (got != want) ++rep.fps_mismatches;
    }
    {
      const auto pred = random_points(rng, 1 + rng.uniform_index(64));
      const auto gt = random_points(rng, 1 + rng.uniform_index(64));
      const double err = std::abs(chamfer_frame(pred, gt).loss - oracle::naive_chamfer(pred, gt));
      rep.chamfer_max_abs_error = std::max(rep.chamfer_max_abs_error, err);
      if (!(err <= kChamferTolerance)) ++rep.chamfer_mismatches;
    }
    {
      static const DirectionCodebook books[] = {DirectionCodebook::quadrants(),
                                                DirectionCodebook::octants(),
                                                DirectionCodebook::sixteen()};
      const auto& book = books[rng.uniform_index(3)];
      const std::size_t l = 2 + rng.uniform_index(4);
      const std::size_t n = 1 + rng.uniform_index(64 / l);
      const auto tube = random_tube(rng, l, n);
      const bool interp = rng.uniform_index(2) == 0;
      const std::size_t stride = 1 + rng.uniform_index(l - 1);
      const auto got = compute_motion_target(tube, book, interp, stride).cd;
      const auto want = oracle::naive_cd(tube, book, interp, stride);
      double err = got.same_shape(want) ? 0.0 : std::numeric_limits<double>::infinity();
      if (got.same_shape(want))
        for (std::size_t i = 0; i < got.flat().size(); ++i)
          err = std::max(err, std::abs(got.flat()[i] - want.flat()[i]));
      rep.cd_max_abs_error = std::max(rep.cd_max_abs_error, err);
      if (!(err <= kCdTolerance)) ++rep.cd_mismatches;
    }
  }
  return rep;
}

struct GradCheckReport {
  std::size_t trials = 0;
  double chamfer_max_rel_error = 0.0;
  double appearance_max_rel_error = 0.0;
  double smooth_l1_max_rel_error = 0.0;
  double continuity_value_gap = 0.0;
  double continuity_derivative_gap = 0.0;

  double max_rel_error() const noexcept {
    return std::max({chamfer_max_rel_error, appearance_max_rel_error, smooth_l1_max_rel_error});
  }
  bool passed() const noexcept {
    return max_rel_error() < kGradTolerance && continuity_value_gap <= 1e-12 &&
           continuity_derivative_gap <= 1e-12;
  }
};

// Central differences of `f` at every coordinate of `x`.
inline std::vector<double> central_differences(std::vector<double> x,
                                               const std::function<double(const std::vector<double>&)>& f) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + kFdStep;
    const double up = f(x);
    x[i] = saved - kFdStep;
    const double down = f(x);
    x[i] = saved;
    g[i] = (up - down) / (2.0 * kFdStep);
  }
  return g;
}

inline std::vector<double> flatten(const std::vector<Vec3>& pts) {
  std::vector<double> v;
  v.reserve(pts.size() * 3);
  for (const auto& p : pts) v.insert(v.end(), p.begin(), p.end());
  return v;
}

inline std::vector<Vec3> unflatten(const std::vector<double>& v) {
  std::vector<Vec3> pts(v.size() / 3);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {v[3 * i], v[3 * i + 1], v[3 * i + 2]};
  return pts;
}

// Tie-free random Chamfer instance: nearest-neighbour choices stay fixed
// under perturbations of size kFdStep.
inline std::pair<std::vector<Vec3>, std::vector<Vec3>> tie_free_pair(CounterRng& rng, std::size_t m,
                                                                     std::size_t k) {
  for (;;) {
    auto pred = random_points(rng, m);
    auto gt = random_points(rng, k);
    if (nearest_gap(pred, gt) > kTieGap && nearest_gap(gt, pred) > kTieGap) return {pred, gt};
  }
}

/**
 * @brief Analytic vs central-difference gradients on `trials` instances.
 *
 * Each trial checks chamfer_frame, appearance_loss (one of the three
 * modes) and motion_loss. Numeric derivatives of the Chamfer value come
 * from the brute-force oracle, not from chamfer_frame itself.
 */
inline GradCheckReport run_gradcheck(std::size_t trials, std::uint64_t seed) {
  GradCheckReport rep;
  rep.trials = trials;
  CounterRng rng(CounterRng::derive_key(seed, {0x6AD0ULL}));
  for (std::size_t trial = 0; trial < trials; ++trial) {
    {
      const std::size_t m = 2 + rng.uniform_index(7), k = 2 + rng.uniform_index(7);
      const auto [pred, gt] = tie_free_pair(rng, m, k);
      const auto analytic = flatten(chamfer_frame(pred, gt).grad);
      const auto numeric = central_differences(
          flatten(pred), [&gt = gt](const std::vector<double>& x) { return oracle::naive_chamfer(unflatten(x), gt); });
      for (std::size_t i = 0; i < analytic.size(); ++i)
        rep.chamfer_max_rel_error =
            std::max(rep.chamfer_max_rel_error, relative_error(analytic[i], numeric[i]));
    }
    {
      const std::size_t l = 2 + rng.uniform_index(3), n = 2 + rng.uniform_index(6);
      const auto mode = static_cast<ReconMode>(rng.uniform_index(3));
      FrameStack pred(l, n), gt(l, n);
      for (;;) {
        for (auto& p : pred.flat()) p = random_point(rng);
        for (auto& p : gt.flat()) p = random_point(rng);
        bool ok = true;
        auto frame_vec = [](std::span<const Vec3> s) { return std::vector<Vec3>(s.begin(), s.end()); };
        if (mode == ReconMode::kCoupled) {
          const auto a = frame_vec(pred.flat()), b = frame_vec(gt.flat());
          ok = nearest_gap(a, b) > kTieGap && nearest_gap(b, a) > kTieGap;
        } else {
          for (std::size_t t = 0; t < l && ok; ++t) {
            const auto a = frame_vec(pred.frame(t)), b = frame_vec(gt.frame(t));
            ok = nearest_gap(a, b) > kTieGap && nearest_gap(b, a) > kTieGap;
          }
        }
        if (ok) break;
      }
      const auto res = appearance_loss(pred, gt, mode);
      std::vector<double> analytic;
      for (const auto& p : res.grad.flat()) analytic.insert(analytic.end(), p.begin(), p.end());
      std::vector<double> x;
      for (const auto& p : pred.flat()) x.insert(x.end(), p.begin(), p.end());
      const auto numeric = central_differences(x, [&](const std::vector<double>& v) {
        FrameStack probe(l, n);
        for (std::size_t i = 0; i < probe.size(); ++i)
          probe.flat()[i] = {v[3 * i], v[3 * i + 1], v[3 * i + 2]};
        return appearance_loss(probe, gt, mode).loss;
      });
      for (std::size_t i = 0; i < analytic.size(); ++i)
        rep.appearance_max_rel_error =
            std::max(rep.appearance_max_rel_error, relative_error(analytic[i], numeric[i]));
    }
    {
      static constexpr std::size_t kSections[] = {4, 8, 16};
      const std::size_t rows = 1 + rng.uniform_index(4), k = kSections[rng.uniform_index(3)];
      Matrix pred(rows, k), gt(rows, k);
      for (std::size_t i = 0; i < pred.flat().size(); ++i) {
        double x;
        do {
          pred.flat()[i] = rng.uniform(-3.0, 3.0);
          gt.flat()[i] = rng.uniform(-3.0, 3.0);
          x = pred.flat()[i] - gt.flat()[i];
        } while (std::abs(std::abs(x) - 1.0) < kTieGap);
      }
      const auto analytic = motion_loss(pred, gt).grad;
      std::vector<double> x(pred.flat().begin(), pred.flat().end());
      const auto numeric = central_differences(x, [&](const std::vector<double>& v) {
        Matrix probe(rows, k);
        std::copy(v.begin(), v.end(), probe.flat().begin());
        return motion_loss(probe, gt).loss;
      });
      for (std::size_t i = 0; i < x.size(); ++i)
        rep.smooth_l1_max_rel_error =
            std::max(rep.smooth_l1_max_rel_error, relative_error(analytic.flat()[i], numeric[i]));
    }
  }

  // Branch agreement at |x| = 1: quadratic formula vs linear formula, and
  // the kernel just below vs at the knee.
  for (double s : {1.0, -1.0}) {
    const double quad = 0.5 * s * s, lin = std::abs(s) - 0.5;
    const double below = std::nextafter(s, 0.0);
    rep.continuity_value_gap = std::max({rep.continuity_value_gap, std::abs(quad - lin),
                                         std::abs(smooth_l1(below) - smooth_l1(s))});
    rep.continuity_derivative_gap =
        std::max({rep.continuity_derivative_gap, std::abs(s - (s > 0 ? 1.0 : -1.0)),
                  std::abs(smooth_l1_derivative(below) - smooth_l1_derivative(s))});
  }
  return rep;
}

}  // namespace tubekit::checks

#endif  // TUBEKIT_CHECKS_HPP
