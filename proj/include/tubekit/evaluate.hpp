// tubekit - point tube pretext targets for point cloud videos
// Losses over whole target bundles.

#ifndef TUBEKIT_EVALUATE_HPP
#define TUBEKIT_EVALUATE_HPP

#include <string>
#include <vector>

#include "tubekit/bundle.hpp"
#include "tubekit/losses.hpp"

namespace tubekit {

struct BundleLoss {
  double app_loss = 0.0;     // mean over masked tubes
  double motion_loss = 0.0;  // mean over masked tubes
  double total_loss = 0.0;
  std::vector<std::uint32_t> tube_indices;
  std::vector<LossReport> per_tube;
};

// Scores `pred` against `gt` entry by entry. Recon mode and motion weight
// come from the ground-truth bundle's config.
inline BundleLoss bundle_loss(const TargetBundle& pred, const TargetBundle& gt) {
  if (pred.entries.size() != gt.entries.size())
    throw InputError("loss: prediction bundle has " + std::to_string(pred.entries.size()) +
                     " tubes, target bundle has " + std::to_string(gt.entries.size()));
  const PipelineConfig cfg = gt.config();
  BundleLoss out;
  double app_sum = 0.0, motion_sum = 0.0;
  for (std::size_t i = 0; i < gt.entries.size(); ++i) {
    const auto& p = pred.entries[i];
    const auto& g = gt.entries[i];
    if (p.tube_index != g.tube_index)
      throw InputError("loss: tube index mismatch at entry " + std::to_string(i));
    const auto app = appearance_loss(p.recon, g.recon, cfg.recon_mode);
    MotionLossResult motion;
    if (g.cd.rows() > 0 || p.cd.rows() > 0) motion = motion_loss(p.cd, g.cd);
    auto rep = total_loss(app, motion, cfg.motion_weight);
    app_sum += rep.app_loss;
    motion_sum += rep.motion_loss;
    out.tube_indices.push_back(g.tube_index);
    out.per_tube.push_back(std::move(rep));
  }
  if (!gt.entries.empty()) {
    const double inv = 1.0 / static_cast<double>(gt.entries.size());
    out.app_loss = app_sum * inv;
    out.motion_loss = motion_sum * inv;
  }
  out.total_loss = cfg.motion_weight == 1.0 ? out.app_loss + out.motion_loss
                                            : out.app_loss + cfg.motion_weight * out.motion_loss;
  return out;
}

}  // namespace tubekit

#endif  // TUBEKIT_EVALUATE_HPP
