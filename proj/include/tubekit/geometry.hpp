// tubekit - point tube pretext targets for point cloud videos
// Geometric kernels: farthest point sampling, ball query, direction bins.

#ifndef TUBEKIT_GEOMETRY_HPP
#define TUBEKIT_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "tubekit/rng.hpp"
#include "tubekit/types.hpp"

namespace tubekit {

/**
 * @brief K unit direction centers partitioning the sphere around a key point.
 *
 * Built-in layouts:
 *  - K=8: octant centers (+-1,+-1,+-1)/sqrt(3). Bin b has sign pattern
 *    x<0 iff b&1, y<0 iff b&2, z<0 iff b&4.
 *  - K=4: xy-plane quadrant bisectors (+-1,+-1,0)/sqrt(2), same bit layout
 *    over x and y.
 *  - K=16: octant center b rotated about z by +22.5 deg (bin 2b) and
 *    -22.5 deg (bin 2b+1).
 * Anything else goes through from_directions().
 */
class DirectionCodebook {
 public:
  static DirectionCodebook octants() {
    std::vector<Vec3> c(8);
    const double s = 1.0 / std::sqrt(3.0);
    for (std::size_t b = 0; b < 8; ++b)
      c[b] = {(b & 1) ? -s : s, (b & 2) ? -s : s, (b & 4) ? -s : s};
    return DirectionCodebook(std::move(c));
  }

  static DirectionCodebook quadrants() {
    std::vector<Vec3> c(4);
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t b = 0; b < 4; ++b) c[b] = {(b & 1) ? -s : s, (b & 2) ? -s : s, 0.0};
    return DirectionCodebook(std::move(c));
  }

  static DirectionCodebook sixteen() {
    const auto oct = octants();
    const double a = std::numbers::pi / 8.0;
    std::vector<Vec3> c;
    c.reserve(16);
    for (const auto& v : oct.centers()) {
      for (double angle : {a, -a}) {
        const double ca = std::cos(angle), sa = std::sin(angle);
        c.push_back(normalized({ca * v[0] - sa * v[1], sa * v[0] + ca * v[1], v[2]}));
      }
    }
    return DirectionCodebook(std::move(c));
  }

  // Built-in layout for K in {4, 8, 16}.
  static DirectionCodebook standard(std::size_t sections) {
    switch (sections) {
      case 4: return quadrants();
      case 8: return octants();
      case 16: return sixteen();
      default:
        throw InputError("no built-in codebook with " + std::to_string(sections) +
                         " sections (use 4, 8, 16 or a custom codebook)");
    }
  }

  // Normalizes each direction. Rejects zero, non-finite or duplicate entries.
  static DirectionCodebook from_directions(const std::vector<Vec3>& dirs) {
    if (dirs.size() < 2) throw InputError("codebook needs at least 2 directions");
    std::vector<Vec3> c;
    c.reserve(dirs.size());
    for (const auto& d : dirs) {
      if (!vec::finite(d) || vec::squared_norm(d) == 0.0)
        throw InputError("codebook direction must be finite and non-zero");
      c.push_back(normalized(d));
    }
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j)
        if (vec::squared_distance(c[i], c[j]) < 1e-24)
          throw InputError("codebook directions must be pairwise distinct");
    return DirectionCodebook(std::move(c));
  }

  std::size_t size() const noexcept { return centers_.size(); }
  const std::vector<Vec3>& centers() const noexcept { return centers_; }
  const Vec3& center(std::size_t b) const { return centers_[b]; }

  friend bool operator==(const DirectionCodebook&, const DirectionCodebook&) = default;

 private:
  explicit DirectionCodebook(std::vector<Vec3> centers) : centers_(std::move(centers)) {}

  static Vec3 normalized(const Vec3& v) { return vec::scale(v, 1.0 / vec::norm(v)); }

  std::vector<Vec3> centers_;
};

// Soft assignment of one offset to its two nearest direction bins. A zero
// offset has no direction; `uniform` is then set and the point spreads 1/K
// over all bins (the bin/weight fields are unused).
struct BinAssignment {
  std::size_t primary_bin = 0;
  std::size_t secondary_bin = 0;
  double primary_weight = 1.0;
  double secondary_weight = 0.0;
  bool uniform = false;
};

namespace detail {

// Angle between an (unnormalized) offset and a unit center, in radians.
inline double angle_to(const Vec3& offset, const Vec3& center) {
  return std::atan2(vec::norm(vec::cross(offset, center)), vec::dot(offset, center));
}

}  // namespace detail

/**
 * @brief Splits a point between its nearest and second-nearest centers.
 *
 * With angles d1 <= d2 to those centers, the secondary bin receives
 * d1 / (d1 + d2) and the primary the rest; without interpolation the
 * primary takes everything. Ties in center ranking go to the lower index.
 */
inline BinAssignment assign_direction(const Vec3& offset, const DirectionCodebook& codebook,
                                      bool interpolate) {
  BinAssignment out;
  if (offset[0] == 0.0 && offset[1] == 0.0 && offset[2] == 0.0) {
    out.uniform = true;
    out.primary_weight = 0.0;
    return out;
  }
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();
  std::size_t b1 = 0, b2 = 0;
  for (std::size_t b = 0; b < codebook.size(); ++b) {
    const double d = detail::angle_to(offset, codebook.center(b));
    if (d < d1) {
      d2 = d1;
      b2 = b1;
      d1 = d;
      b1 = b;
    } else if (d < d2) {
      d2 = d;
      b2 = b;
    }
  }
  out.primary_bin = b1;
  out.secondary_bin = b2;
  if (interpolate) {
    // primary >= 0.5, so 1 - primary is exact and the weights sum to 1.
    out.primary_weight = d2 / (d1 + d2);
    out.secondary_weight = 1.0 - out.primary_weight;
  }
  return out;
}

// FPS seeded by an explicit first index. Each step takes the point whose
// squared distance to the selected set is largest; ties go to the lower index.
inline std::vector<std::uint32_t> farthest_point_sample_from(const Frame& frame, std::size_t count,
                                                             std::size_t first_index) {
  const std::size_t n = frame.size();
  if (count < 1 || count > n)
    throw RangeError("farthest_point_sample: count " + std::to_string(count) +
                     " outside [1, " + std::to_string(n) + "]");
  if (first_index >= n) throw RangeError("farthest_point_sample: first index out of range");

  std::vector<std::uint32_t> selected;
  selected.reserve(count);
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  // Selected points carry -1 so coincident duplicates are never re-picked.
  std::size_t last = first_index;
  selected.push_back(static_cast<std::uint32_t>(last));
  min_d2[last] = -1.0;
  while (selected.size() < count) {
    const Vec3& anchor = frame.points[last];
    std::size_t best = 0;
    double best_d2 = -2.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = vec::squared_distance(frame.points[i], anchor);
      if (d2 < min_d2[i]) min_d2[i] = d2;
      if (min_d2[i] > best_d2) {
        best_d2 = min_d2[i];
        best = i;
      }
    }
    last = best;
    selected.push_back(static_cast<std::uint32_t>(last));
    min_d2[last] = -1.0;
  }
  return selected;
}

inline std::vector<std::uint32_t> farthest_point_sample(const Frame& frame, std::size_t count,
                                                        std::uint64_t seed) {
  if (frame.empty()) throw RangeError("farthest_point_sample: empty frame");
  CounterRng rng(seed);
  return farthest_point_sample_from(frame, count, rng.uniform_index(frame.size()));
}

struct NeighborSample {
  std::vector<std::uint32_t> indices;
  std::size_t hits = 0;  // points strictly inside the radius
};

/**
 * @brief Samples n indices among points with distance < radius to center.
 *
 * hits >= n: n distinct hits, uniformly without replacement.
 * 0 < hits < n: n uniform draws with replacement.
 * hits == 0: n copies of the nearest point (lowest index on ties).
 */
inline NeighborSample ball_query_sample(const Frame& frame, const Vec3& center, double radius,
                                        std::size_t n, std::uint64_t seed) {
  if (frame.empty()) throw InputError("ball_query: empty frame");
  if (!(radius > 0.0)) throw InputError("ball_query: radius must be positive");
  if (n < 1) throw InputError("ball_query: n must be >= 1");

  const double r2 = radius * radius;
  std::vector<std::uint32_t> hits;
  std::size_t nearest = 0;
  double nearest_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const double d2 = vec::squared_distance(frame.points[i], center);
    if (d2 < r2) hits.push_back(static_cast<std::uint32_t>(i));
    if (d2 < nearest_d2) {
      nearest_d2 = d2;
      nearest = i;
    }
  }

  NeighborSample out;
  out.hits = hits.size();
  CounterRng rng(seed);
  if (hits.empty()) {
    out.indices.assign(n, static_cast<std::uint32_t>(nearest));
  } else if (hits.size() >= n) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + rng.uniform_index(hits.size() - i);
      std::swap(hits[i], hits[j]);
    }
    hits.resize(n);
    out.indices = std::move(hits);
  } else {
    out.indices.resize(n);
    for (auto& idx : out.indices) idx = hits[rng.uniform_index(hits.size())];
  }
  return out;
}

inline std::vector<std::uint32_t> ball_query(const Frame& frame, const Vec3& center, double radius,
                                             std::size_t n, std::uint64_t seed) {
  return ball_query_sample(frame, center, radius, n, seed).indices;
}

}  // namespace tubekit

#endif  // TUBEKIT_GEOMETRY_HPP
