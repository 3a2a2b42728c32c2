// tubekit - point tube pretext targets for point cloud videos
// Divide a synthetic clip, mask it and score a dummy prediction.

#include <cstdio>

#include "tubekit/tubekit.hpp"

int main() {
  using namespace tubekit;

  const auto video = gen_synthetic(MotionKind::kRaise, 24, 1024, /*seed=*/1);
  PipelineConfig cfg;
  cfg.seed = 7;

  auto set = mask(divide(video, cfg), cfg.mask_ratio, cfg.seed);
  const auto book = DirectionCodebook::octants();
  const auto targets = assemble_targets(set, cfg, book);
  std::printf("%zu tubes, %zu masked\n", set.tubes.size(), targets.tube_indices.size());

  // An all-zero "prediction" for the first masked tube.
  const auto& gt_points = targets.recon.front();
  const auto& gt_cd = targets.motion.front().cd;
  const FrameStack pred_points(gt_points.frames(), gt_points.points_per_frame());
  const Matrix pred_cd(gt_cd.rows(), gt_cd.cols());

  const auto report = total_loss(appearance_loss(pred_points, gt_points, cfg.recon_mode),
                                 motion_loss(pred_cd, gt_cd));
  std::printf("app %.6f  motion %.6f  total %.6f\n", report.app_loss, report.motion_loss,
              report.total_loss);
  return 0;
}
