// tubekit - point tube pretext targets for point cloud videos
// Cardinality histograms and temporal cardinality differences.

#ifndef TUBEKIT_MOTION_TARGETS_HPP
#define TUBEKIT_MOTION_TARGETS_HPP

#include <span>
#include <string>

#include "tubekit/geometry.hpp"
#include "tubekit/types.hpp"

namespace tubekit {

// Expected point count per direction bin for one tube frame.
inline CardinalityHistogram cardinality_histogram(std::span<const Vec3> offsets,
                                                  const DirectionCodebook& codebook,
                                                  bool interpolate) {
  const std::size_t k = codebook.size();
  CardinalityHistogram h;
  h.bins.assign(k, 0.0);
  const double spread = 1.0 / static_cast<double>(k);
  for (const auto& p : offsets) {
    const BinAssignment a = assign_direction(p, codebook, interpolate);
    if (a.uniform) {
      for (auto& b : h.bins) b += spread;
      continue;
    }
    h.bins[a.primary_bin] += a.primary_weight;
    if (a.secondary_weight > 0.0) h.bins[a.secondary_bin] += a.secondary_weight;
  }
  return h;
}

struct MotionOptions {
  bool interpolate = true;
  std::size_t stride = 1;
  // Divide CD entries by points per frame.
  bool normalize = false;
};

// One row per frame pair (t, t + stride); l - stride rows in total.
inline MotionTarget compute_motion_target(const PointTube& tube, const DirectionCodebook& codebook,
                                          const MotionOptions& opts = {}) {
  const std::size_t l = tube.frames();
  if (opts.stride < 1 || opts.stride + 1 > l)
    throw RangeError("compute_motion_target: stride " + std::to_string(opts.stride) +
                     " outside [1, " + std::to_string(l > 0 ? l - 1 : 0) + "]");

  std::vector<CardinalityHistogram> hist;
  hist.reserve(l);
  for (std::size_t t = 0; t < l; ++t)
    hist.push_back(cardinality_histogram(tube.local_points.frame(t), codebook, opts.interpolate));

  const std::size_t k = codebook.size();
  const double scale = opts.normalize ? 1.0 / static_cast<double>(tube.points_per_frame()) : 1.0;
  MotionTarget out;
  out.temporal_stride = opts.stride;
  out.cd = Matrix(l - opts.stride, k);
  for (std::size_t t = 0; t + opts.stride < l; ++t)
    for (std::size_t b = 0; b < k; ++b) {
      const double diff = hist[t + opts.stride].bins[b] - hist[t].bins[b];
      out.cd(t, b) = opts.normalize ? diff * scale : diff;
    }
  return out;
}

inline MotionTarget compute_motion_target(const PointTube& tube, const DirectionCodebook& codebook,
                                          bool interpolate, std::size_t stride) {
  return compute_motion_target(tube, codebook, MotionOptions{interpolate, stride, false});
}

}  // namespace tubekit

#endif  // TUBEKIT_MOTION_TARGETS_HPP
