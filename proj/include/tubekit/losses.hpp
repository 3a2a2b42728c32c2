// tubekit - point tube pretext targets for point cloud videos
// Appearance (Chamfer) and motion (smooth L1) losses with analytic gradients.

#ifndef TUBEKIT_LOSSES_HPP
#define TUBEKIT_LOSSES_HPP

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "tubekit/tube_pipeline.hpp"
#include "tubekit/types.hpp"

namespace tubekit {

struct ChamferResult {
  double loss = 0.0;
  std::vector<Vec3> grad;  // d loss / d pred
};

/**
 * @brief Squared-l2 Chamfer distance between pred (m points) and gt (k).
 *
 * loss = mean_a min_b |a-b|^2 + mean_b min_a |b-a|^2. Nearest-neighbour
 * ties resolve to the lowest index, which fixes the subgradient.
 */
inline ChamferResult chamfer_frame(std::span<const Vec3> pred, std::span<const Vec3> gt) {
  if (pred.empty() || gt.empty()) throw InputError("chamfer_frame: empty point set");
  const std::size_t m = pred.size(), k = gt.size();

  std::vector<double> best_pred(m, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> arg_pred(m, 0);
  std::vector<double> best_gt(k, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> arg_gt(k, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const double d2 = vec::squared_distance(pred[a], gt[b]);
      if (d2 < best_pred[a]) {
        best_pred[a] = d2;
        arg_pred[a] = b;
      }
      if (d2 < best_gt[b]) {
        best_gt[b] = d2;
        arg_gt[b] = a;
      }
    }

  ChamferResult out;
  out.grad.assign(m, Vec3{0, 0, 0});
  double forward = 0.0, backward = 0.0;
  const double wm = 2.0 / static_cast<double>(m), wk = 2.0 / static_cast<double>(k);
  for (std::size_t a = 0; a < m; ++a) {
    forward += best_pred[a];
    out.grad[a] = vec::add(out.grad[a], vec::scale(vec::sub(pred[a], gt[arg_pred[a]]), wm));
  }
  for (std::size_t b = 0; b < k; ++b) {
    backward += best_gt[b];
    const std::size_t a = arg_gt[b];
    out.grad[a] = vec::add(out.grad[a], vec::scale(vec::sub(pred[a], gt[b]), wk));
  }
  out.loss = forward / static_cast<double>(m) + backward / static_cast<double>(k);
  return out;
}

struct AppearanceResult {
  double loss = 0.0;
  FrameStack grad;
};

// decoupled: mean of per-frame Chamfer; coupled: one Chamfer over all
// frames pooled; middle: Chamfer on frame floor(l/2) only.
inline AppearanceResult appearance_loss(const FrameStack& pred, const FrameStack& gt,
                                        ReconMode mode) {
  if (!pred.same_shape(gt) || pred.size() == 0)
    throw InputError("appearance_loss: prediction and target shapes differ");
  AppearanceResult out;
  out.grad = FrameStack(pred.frames(), pred.points_per_frame());
  switch (mode) {
    case ReconMode::kDecoupled: {
      const double inv_l = 1.0 / static_cast<double>(pred.frames());
      double sum = 0.0;
      for (std::size_t t = 0; t < pred.frames(); ++t) {
        const auto r = chamfer_frame(pred.frame(t), gt.frame(t));
        sum += r.loss;
        auto g = out.grad.frame(t);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = vec::scale(r.grad[i], inv_l);
      }
      out.loss = sum * inv_l;
      break;
    }
    case ReconMode::kCoupled: {
      const auto r = chamfer_frame(pred.flat(), gt.flat());
      out.loss = r.loss;
      std::copy(r.grad.begin(), r.grad.end(), out.grad.flat().begin());
      break;
    }
    case ReconMode::kMiddleFrame: {
      const std::size_t mid = pred.frames() / 2;
      const auto r = chamfer_frame(pred.frame(mid), gt.frame(mid));
      out.loss = r.loss;
      std::copy(r.grad.begin(), r.grad.end(), out.grad.frame(mid).begin());
      break;
    }
  }
  return out;
}

inline double smooth_l1(double x) {
  const double ax = std::abs(x);
  return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

inline double smooth_l1_derivative(double x) {
  if (std::abs(x) < 1.0) return x;
  return x > 0.0 ? 1.0 : -1.0;
}

struct MotionLossResult {
  double loss = 0.0;
  Matrix grad;
};

// Smooth L1 averaged over the K bins of a row, then over rows.
inline MotionLossResult motion_loss(const Matrix& pred, const Matrix& gt) {
  if (!pred.same_shape(gt) || pred.rows() == 0 || pred.cols() == 0)
    throw InputError("motion_loss: prediction and target shapes differ");
  const std::size_t rows = pred.rows(), k = pred.cols();
  const double inv_k = 1.0 / static_cast<double>(k);
  const double inv_rows = 1.0 / static_cast<double>(rows);
  const double g_scale = 1.0 / static_cast<double>(k * rows);
  MotionLossResult out;
  out.grad = Matrix(rows, k);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double row_sum = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      const double x = pred(r, b) - gt(r, b);
      row_sum += smooth_l1(x);
      out.grad(r, b) = smooth_l1_derivative(x) * g_scale;
    }
    total += row_sum * inv_k;
  }
  out.loss = total * inv_rows;
  return out;
}

// Unweighted sum by default. grad_motion is scaled by the weight, so with
// the default weight of 1 both gradients pass through bit-for-bit.
inline LossReport total_loss(const AppearanceResult& app, const MotionLossResult& motion,
                             double motion_weight = 1.0) {
  if (!std::isfinite(app.loss) || !std::isfinite(motion.loss))
    throw InputError("total_loss: non-finite input loss");
  LossReport rep;
  rep.app_loss = app.loss;
  rep.motion_loss = motion.loss;
  rep.grad_app = app.grad;
  rep.grad_motion = motion.grad;
  if (motion_weight == 1.0) {
    rep.total_loss = app.loss + motion.loss;
  } else {
    rep.total_loss = app.loss + motion_weight * motion.loss;
    for (auto& g : rep.grad_motion.flat()) g *= motion_weight;
  }
  return rep;
}

}  // namespace tubekit

#endif  // TUBEKIT_LOSSES_HPP
