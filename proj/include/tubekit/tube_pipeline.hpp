// tubekit - point tube pretext targets for point cloud videos
// Tube division, embedding, masking and target assembly.

#ifndef TUBEKIT_TUBE_PIPELINE_HPP
#define TUBEKIT_TUBE_PIPELINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "tubekit/geometry.hpp"
#include "tubekit/motion_targets.hpp"
#include "tubekit/rng.hpp"
#include "tubekit/types.hpp"

namespace tubekit {

enum class ReconMode { kDecoupled, kCoupled, kMiddleFrame };

inline std::string_view to_string(ReconMode m) {
  switch (m) {
    case ReconMode::kDecoupled: return "decoupled";
    case ReconMode::kCoupled: return "coupled";
    case ReconMode::kMiddleFrame: return "middle";
  }
  return "decoupled";
}

inline ReconMode parse_recon_mode(std::string_view s) {
  if (s == "decoupled") return ReconMode::kDecoupled;
  if (s == "coupled") return ReconMode::kCoupled;
  if (s == "middle" || s == "middle_frame") return ReconMode::kMiddleFrame;
  throw InputError("unknown recon mode '" + std::string(s) + "'");
}

struct PipelineConfig {
  std::size_t tube_frames = 3;          // l
  std::size_t neighbors = 32;           // n
  double radius = 0.3;                  // r, meters
  std::size_t spatial_downsample = 32;
  std::size_t temporal_downsample = 2;
  double mask_ratio = 0.75;
  ReconMode recon_mode = ReconMode::kDecoupled;
  std::uint64_t seed = 0;

  // Motion stream.
  bool motion_stream = true;
  std::size_t sections = 8;  // 0 = custom codebook supplied separately
  bool interpolate = true;
  std::size_t cd_stride = 1;
  bool cd_normalize = false;
  double motion_weight = 1.0;

  void validate() const {
    if (tube_frames < 1) throw InputError("tube_frames must be >= 1");
    if (tube_frames < 2 && (recon_mode != ReconMode::kMiddleFrame || motion_stream))
      throw InputError("tube_frames must be >= 2 unless recon_mode=middle and motion stream is off");
    if (neighbors < 1) throw InputError("neighbors must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("radius must be positive");
    if (spatial_downsample < 1) throw InputError("spatial_downsample must be >= 1");
    if (temporal_downsample < 1) throw InputError("temporal_downsample must be >= 1");
    if (!(mask_ratio >= 0.0 && mask_ratio <= 1.0)) throw InputError("mask_ratio must lie in [0, 1]");
    if (motion_stream && (cd_stride < 1 || cd_stride + 1 > tube_frames))
      throw InputError("cd_stride must lie in [1, tube_frames - 1]");
    if (!std::isfinite(motion_weight)) throw InputError("motion_weight must be finite");
  }

  MotionOptions motion_options() const { return {interpolate, cd_stride, cd_normalize}; }

  // Window of an anchor frame: l consecutive frames starting floor(l/2)
  // before it.
  std::size_t window_offset() const noexcept { return tube_frames / 2; }
};

/**
 * @brief Per-point feature extractor f: R^3 -> R^D.
 *
 * Two affine layers, hidden width H, with max(0, x) between them (or the
 * identity when constructed with Activation::kIdentity).
 */
class EmbeddingMLP {
 public:
  enum class Activation { kRelu, kIdentity };

  EmbeddingMLP(std::size_t hidden, std::size_t out, std::vector<double> w1, std::vector<double> b1,
               std::vector<double> w2, std::vector<double> b2,
               Activation act = Activation::kRelu)
      : hidden_(hidden), out_(out), w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)),
        b2_(std::move(b2)), act_(act) {
    if (w1_.size() != hidden_ * 3 || b1_.size() != hidden_ || w2_.size() != out_ * hidden_ ||
        b2_.size() != out_)
      throw InputError("EmbeddingMLP: parameter shapes do not match widths");
    for (const auto* v : {&w1_, &b1_, &w2_, &b2_})
      for (double x : *v)
        if (!std::isfinite(x)) throw InputError("EmbeddingMLP: non-finite parameter");
  }

  static EmbeddingMLP zeros(std::size_t hidden, std::size_t out) {
    return EmbeddingMLP(hidden, out, std::vector<double>(hidden * 3, 0.0),
                        std::vector<double>(hidden, 0.0), std::vector<double>(out * hidden, 0.0),
                        std::vector<double>(out, 0.0));
  }

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases.
  static EmbeddingMLP seeded(std::size_t hidden, std::size_t out, std::uint64_t init_seed) {
    CounterRng rng(CounterRng::derive_key(init_seed, {stream::kMlpInit}));
    auto fill = [&](std::size_t count, std::size_t fan_in) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      std::vector<double> v(count);
      for (auto& x : v) x = rng.uniform(-bound, bound);
      return v;
    };
    auto w1 = fill(hidden * 3, 3);
    auto b1 = fill(hidden, 3);
    auto w2 = fill(out * hidden, hidden);
    auto b2 = fill(out, hidden);
    return EmbeddingMLP(hidden, out, std::move(w1), std::move(b1), std::move(w2), std::move(b2));
  }

  std::size_t hidden_width() const noexcept { return hidden_; }
  std::size_t output_width() const noexcept { return out_; }
  const std::vector<double>& w1() const noexcept { return w1_; }  // H x 3, row-major
  const std::vector<double>& b1() const noexcept { return b1_; }
  const std::vector<double>& w2() const noexcept { return w2_; }  // D x H, row-major
  const std::vector<double>& b2() const noexcept { return b2_; }
  Activation activation() const noexcept { return act_; }

  // Accumulates f(x) into `acc` (size D).
  void accumulate(const Vec3& x, std::span<double> acc) const {
    std::vector<double> h(hidden_);
    for (std::size_t j = 0; j < hidden_; ++j) {
      double s = b1_[j] + w1_[j * 3] * x[0] + w1_[j * 3 + 1] * x[1] + w1_[j * 3 + 2] * x[2];
      h[j] = act_ == Activation::kRelu ? std::max(0.0, s) : s;
    }
    for (std::size_t o = 0; o < out_; ++o) {
      double s = b2_[o];
      for (std::size_t j = 0; j < hidden_; ++j) s += w2_[o * hidden_ + j] * h[j];
      acc[o] += s;
    }
  }

  std::vector<double> operator()(const Vec3& x) const {
    std::vector<double> y(out_, 0.0);
    accumulate(x, y);
    return y;
  }

 private:
  std::size_t hidden_;
  std::size_t out_;
  std::vector<double> w1_, b1_, w2_, b2_;
  Activation act_;
};

// Tube embedding: sum of f over all l x n local offsets.
inline std::vector<double> embed(const PointTube& tube, const EmbeddingMLP& mlp) {
  std::vector<double> e(mlp.output_width(), 0.0);
  for (const auto& p : tube.local_points.flat()) mlp.accumulate(p, e);
  return e;
}

// Gathers a tube from explicit per-frame source indices (frames
// first_frame .. first_frame + l - 1, n indices each, frame-major).
inline PointTube extract_tube(const PointCloudVideo& video, const KeyPoint& key_point,
                              std::size_t first_frame, std::size_t frames, std::size_t n,
                              std::vector<std::uint32_t> indices) {
  if (first_frame + frames > video.frame_count())
    throw RangeError("extract_tube: window exceeds video length");
  if (indices.size() != frames * n) throw InputError("extract_tube: index count mismatch");
  PointTube tube;
  tube.key_point = key_point;
  tube.first_frame = first_frame;
  tube.local_points = FrameStack(frames, n);
  for (std::size_t t = 0; t < frames; ++t) {
    const Frame& f = video.frames[first_frame + t];
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t idx = indices[t * n + i];
      if (idx >= f.size()) throw RangeError("extract_tube: source index out of range");
      tube.local_points.at(t, i) = vec::sub(f.points[idx], key_point.position);
    }
  }
  tube.source_indices = std::move(indices);
  return tube;
}

struct Division {
  std::vector<PointTube> tubes;
  std::vector<std::size_t> anchor_frames;
  std::vector<std::size_t> key_points_per_anchor;
  std::size_t queries = 0;
  std::size_t fallback_queries = 0;  // no point inside the radius
  std::size_t sparse_queries = 0;    // fewer hits than n, sampled with replacement
};

// Anchor frames whose full l-frame window fits inside a T-frame video.
inline std::vector<std::size_t> anchor_frames(std::size_t frame_count, const PipelineConfig& cfg) {
  std::vector<std::size_t> out;
  const std::size_t half = cfg.window_offset();
  for (std::size_t t = half; t - half + cfg.tube_frames <= frame_count; t += cfg.temporal_downsample)
    out.push_back(t);
  return out;
}

inline std::size_t key_points_for(std::size_t points, const PipelineConfig& cfg) {
  return std::max<std::size_t>(1, points / cfg.spatial_downsample);
}

/**
 * @brief Divides a video into point tubes.
 *
 * For every anchor frame, FPS picks key points in that frame; each key
 * point is then ball-queried with the same center in each of the l window
 * frames. All sampling draws from streams keyed by (seed, anchor, key
 * point, window frame), so the result does not depend on evaluation order.
 */
inline Division divide_with_stats(const PointCloudVideo& video, const PipelineConfig& cfg) {
  cfg.validate();
  const auto report = validate_video(video);
  if (!report.ok()) {
    std::string msg = "invalid video:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw InputError(msg);
  }
  const std::size_t l = cfg.tube_frames;
  if (video.frame_count() < l)
    throw InputError("video has " + std::to_string(video.frame_count()) +
                     " frames, fewer than tube length " + std::to_string(l));

  Division out;
  out.anchor_frames = anchor_frames(video.frame_count(), cfg);
  const std::size_t half = cfg.window_offset();
  for (const std::size_t anchor : out.anchor_frames) {
    const Frame& frame = video.frames[anchor];
    const std::size_t count = key_points_for(frame.size(), cfg);
    const auto keys = farthest_point_sample(
        frame, count, CounterRng::derive_key(cfg.seed, {stream::kKeyPointFps, anchor}));
    out.key_points_per_anchor.push_back(keys.size());
    const std::size_t first = anchor - half;
    for (std::size_t j = 0; j < keys.size(); ++j) {
      const KeyPoint kp{frame.points[keys[j]], anchor};
      std::vector<std::uint32_t> indices;
      indices.reserve(l * cfg.neighbors);
      for (std::size_t w = 0; w < l; ++w) {
        auto sample = ball_query_sample(
            video.frames[first + w], kp.position, cfg.radius, cfg.neighbors,
            CounterRng::derive_key(cfg.seed, {stream::kBallQuery, anchor, j, w}));
        ++out.queries;
        if (sample.hits == 0) ++out.fallback_queries;
        else if (sample.hits < cfg.neighbors) ++out.sparse_queries;
        indices.insert(indices.end(), sample.indices.begin(), sample.indices.end());
      }
      out.tubes.push_back(extract_tube(video, kp, first, l, cfg.neighbors, std::move(indices)));
    }
  }
  return out;
}

inline std::vector<PointTube> divide(const PointCloudVideo& video, const PipelineConfig& cfg) {
  return divide_with_stats(video, cfg).tubes;
}

// Masked tube indices in ascending order: floor(ratio * count) of them,
// uniformly without replacement.
inline std::vector<bool> mask_flags(std::size_t count, double mask_ratio, std::uint64_t seed) {
  if (!(mask_ratio >= 0.0 && mask_ratio <= 1.0))
    throw RangeError("mask_ratio must lie in [0, 1]");
  const auto masked = static_cast<std::size_t>(std::floor(mask_ratio * static_cast<double>(count)));
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(CounterRng::derive_key(seed, {stream::kMask}));
  for (std::size_t i = 0; i < masked; ++i) {
    const std::size_t j = i + rng.uniform_index(count - i);
    std::swap(order[i], order[j]);
  }
  std::vector<bool> flags(count, false);
  for (std::size_t i = 0; i < masked; ++i) flags[order[i]] = true;
  return flags;
}

inline TubeSetWithMask mask(std::vector<PointTube> tubes, double mask_ratio, std::uint64_t seed) {
  TubeSetWithMask set;
  set.masked_flags = mask_flags(tubes.size(), mask_ratio, seed);
  set.tubes = std::move(tubes);
  set.mask_ratio = mask_ratio;
  set.rng_seed = seed;
  return set;
}

struct MaskedTargets {
  std::vector<std::size_t> tube_indices;
  std::vector<FrameStack> recon;
  std::vector<MotionTarget> motion;  // empty when the motion stream is off
};

// Reconstruction target of one tube under a recon mode.
inline FrameStack recon_target(const PointTube& tube, ReconMode mode) {
  if (mode != ReconMode::kMiddleFrame) return tube.local_points;
  const std::size_t mid = tube.frames() / 2;
  FrameStack out(1, tube.points_per_frame());
  const auto src = tube.local_points.frame(mid);
  std::copy(src.begin(), src.end(), out.frame(0).begin());
  return out;
}

inline MaskedTargets assemble_targets(const TubeSetWithMask& set, const PipelineConfig& cfg,
                                      const DirectionCodebook& codebook) {
  if (set.masked_flags.size() != set.tubes.size())
    throw InputError("assemble_targets: mask flags do not match tube count");
  MaskedTargets out;
  for (std::size_t i = 0; i < set.tubes.size(); ++i) {
    if (!set.masked_flags[i]) continue;
    out.tube_indices.push_back(i);
    out.recon.push_back(recon_target(set.tubes[i], cfg.recon_mode));
    if (cfg.motion_stream)
      out.motion.push_back(compute_motion_target(set.tubes[i], codebook, cfg.motion_options()));
  }
  return out;
}

inline MaskedTargets assemble_targets(const TubeSetWithMask& set, const PipelineConfig& cfg) {
  return assemble_targets(set, cfg, DirectionCodebook::standard(cfg.sections));
}

}  // namespace tubekit

#endif  // TUBEKIT_TUBE_PIPELINE_HPP
