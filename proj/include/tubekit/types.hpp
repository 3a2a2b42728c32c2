// tubekit - point tube pretext targets for point cloud videos
// Shared domain types.

#ifndef TUBEKIT_TYPES_HPP
#define TUBEKIT_TYPES_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tubekit {

// Errors. Callers distinguish malformed input, out-of-range arguments and
// file-format problems by type.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

using Vec3 = std::array<double, 3>;

namespace vec {

constexpr Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
constexpr Vec3 add(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
constexpr Vec3 scale(const Vec3& a, double s) {
  return {a[0] * s, a[1] * s, a[2] * s};
}
constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
constexpr double squared_norm(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(squared_norm(a)); }
constexpr double squared_distance(const Vec3& a, const Vec3& b) {
  return squared_norm(sub(a, b));
}
inline bool finite(const Vec3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

}  // namespace vec

// Nearest f32 value, widened back to double. The store through a volatile
// keeps the narrowing from being folded away by optimizers.
inline double round_to_f32(double v) {
  volatile float f = static_cast<float>(v);
  return static_cast<double>(f);
}

struct Frame {
  std::vector<Vec3> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

// Timestamps are integer frame ticks; temporal distance is index difference.
struct PointCloudVideo {
  std::vector<Frame> frames;
  std::vector<std::int64_t> timestamps;

  std::size_t frame_count() const noexcept { return frames.size(); }

  // Builds a video with timestamps 0..T-1.
  static PointCloudVideo from_frames(std::vector<Frame> frames) {
    PointCloudVideo v;
    v.timestamps.resize(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i)
      v.timestamps[i] = static_cast<std::int64_t>(i);
    v.frames = std::move(frames);
    return v;
  }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

inline ValidationReport validate_video(const PointCloudVideo& video) {
  ValidationReport report;
  auto add = [&](std::string msg) {
    for (const auto& v : report.violations)
      if (v == msg) return;
    report.violations.push_back(std::move(msg));
  };
  if (video.frames.empty()) add("no frames");
  if (video.timestamps.size() != video.frames.size())
    add("timestamp count mismatch");
  for (std::size_t i = 1; i < video.timestamps.size(); ++i)
    if (video.timestamps[i] <= video.timestamps[i - 1])
      add("non-increasing timestamps");
  for (const auto& frame : video.frames) {
    if (frame.empty()) add("empty frame");
    for (const auto& p : frame.points)
      if (!vec::finite(p)) add("non-finite coordinate");
  }
  return report;
}

// Dense row-major stack of `frames` x `points` 3-vectors. Used for tube
// offsets, reconstruction targets, predictions and their gradients.
class FrameStack {
 public:
  FrameStack() = default;
  FrameStack(std::size_t frames, std::size_t points)
      : frames_(frames), points_(points), data_(frames * points, Vec3{0, 0, 0}) {}

  std::size_t frames() const noexcept { return frames_; }
  std::size_t points_per_frame() const noexcept { return points_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const Vec3> frame(std::size_t t) const {
    return {data_.data() + t * points_, points_};
  }
  std::span<Vec3> frame(std::size_t t) {
    return {data_.data() + t * points_, points_};
  }
  const Vec3& at(std::size_t t, std::size_t i) const { return data_[t * points_ + i]; }
  Vec3& at(std::size_t t, std::size_t i) { return data_[t * points_ + i]; }

  std::span<const Vec3> flat() const { return data_; }
  std::span<Vec3> flat() { return data_; }

  bool same_shape(const FrameStack& o) const noexcept {
    return frames_ == o.frames_ && points_ == o.points_;
  }
  friend bool operator==(const FrameStack&, const FrameStack&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t points_ = 0;
  std::vector<Vec3> data_;
};

// Row-major real matrix (CD targets, motion predictions, their gradients).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> flat() const { return data_; }
  std::span<double> flat() { return data_; }

  bool same_shape(const Matrix& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct KeyPoint {
  Vec3 position{0, 0, 0};
  std::size_t frame_index = 0;

  friend bool operator==(const KeyPoint&, const KeyPoint&) = default;
};

// l frames x n sampled neighbours around a key point. local_points holds
// point - key_point.position; source_indices(t, i) indexes frame
// first_frame + t of the source video.
struct PointTube {
  KeyPoint key_point;
  std::size_t first_frame = 0;
  FrameStack local_points;
  std::vector<std::uint32_t> source_indices;

  std::size_t frames() const noexcept { return local_points.frames(); }
  std::size_t points_per_frame() const noexcept { return local_points.points_per_frame(); }
  std::uint32_t source_index(std::size_t t, std::size_t i) const {
    return source_indices[t * points_per_frame() + i];
  }

  friend bool operator==(const PointTube&, const PointTube&) = default;
};

struct TubeSetWithMask {
  std::vector<PointTube> tubes;
  std::vector<bool> masked_flags;
  double mask_ratio = 0.0;
  std::uint64_t rng_seed = 0;

  std::size_t masked_count() const noexcept {
    std::size_t c = 0;
    for (bool f : masked_flags) c += f ? 1 : 0;
    return c;
  }
  std::vector<std::size_t> masked_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < masked_flags.size(); ++i)
      if (masked_flags[i]) out.push_back(i);
    return out;
  }
};

struct CardinalityHistogram {
  std::vector<double> bins;

  double total() const noexcept {
    double s = 0.0;
    for (double b : bins) s += b;
    return s;
  }
};

// Row t = histogram(frame t + stride) - histogram(frame t).
struct MotionTarget {
  Matrix cd;
  std::size_t temporal_stride = 1;
};

struct LossReport {
  double app_loss = 0.0;
  double motion_loss = 0.0;
  double total_loss = 0.0;
  FrameStack grad_app;
  Matrix grad_motion;
};

}  // namespace tubekit

#endif  // TUBEKIT_TYPES_HPP
