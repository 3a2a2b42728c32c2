// tubekit - point tube pretext targets for point cloud videos
// Brute-force reference kernels for tests and the `verify` command.
//
// Nothing here calls into geometry, motion_targets or losses; the shared
// headers are included only for their data types.

#ifndef TUBEKIT_ORACLE_HPP
#define TUBEKIT_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tubekit/geometry.hpp"
#include "tubekit/types.hpp"

namespace tubekit::oracle {

namespace detail {

inline double dist2(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace detail

// Each round recomputes every candidate's distance to the whole selected set.
inline std::vector<std::uint32_t> naive_fps(const Frame& frame, std::size_t count,
                                            std::size_t first_index) {
  const std::size_t n = frame.points.size();
  if (count < 1 || count > n) throw RangeError("naive_fps: count out of range");
  if (first_index >= n) throw RangeError("naive_fps: first index out of range");
  std::vector<std::uint32_t> chosen{static_cast<std::uint32_t>(first_index)};
  std::vector<bool> taken(n, false);
  taken[first_index] = true;
  while (chosen.size() < count) {
    bool found = false;
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      double score = detail::dist2(frame.points[i], frame.points[chosen[0]]);
      for (std::size_t s = 1; s < chosen.size(); ++s) {
        const double d = detail::dist2(frame.points[i], frame.points[chosen[s]]);
        if (d < score) score = d;
      }
      if (!found || score > best_score) {
        found = true;
        best = i;
        best_score = score;
      }
    }
    taken[best] = true;
    chosen.push_back(static_cast<std::uint32_t>(best));
  }
  return chosen;
}

inline double naive_chamfer(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt) {
  if (pred.empty() || gt.empty()) throw InputError("naive_chamfer: empty point set");
  double forward = 0.0;
  for (const auto& a : pred) {
    double best = detail::dist2(a, gt[0]);
    for (const auto& b : gt) {
      const double d = detail::dist2(a, b);
      if (d < best) best = d;
    }
    forward += best;
  }
  double backward = 0.0;
  for (const auto& b : gt) {
    double best = detail::dist2(b, pred[0]);
    for (const auto& a : pred) {
      const double d = detail::dist2(b, a);
      if (d < best) best = d;
    }
    backward += best;
  }
  return forward / static_cast<double>(pred.size()) + backward / static_cast<double>(gt.size());
}

// Per-point bin weights accumulated into per-frame histograms, then row
// differences. Angles use the half-angle form 2*atan2(|u-c|, |u+c|).
inline Matrix naive_cd(const PointTube& tube, const DirectionCodebook& codebook, bool interpolate,
                       std::size_t stride) {
  const std::size_t l = tube.local_points.frames();
  const std::size_t n = tube.local_points.points_per_frame();
  const std::size_t k = codebook.centers().size();
  if (stride < 1 || stride >= l) throw RangeError("naive_cd: stride out of range");

  std::vector<std::vector<double>> hist(l, std::vector<double>(k, 0.0));
  for (std::size_t t = 0; t < l; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 p = tube.local_points.at(t, i);
      const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      if (len == 0.0) {
        for (std::size_t b = 0; b < k; ++b) hist[t][b] += 1.0 / static_cast<double>(k);
        continue;
      }
      const Vec3 u{p[0] / len, p[1] / len, p[2] / len};
      std::vector<double> angle(k);
      for (std::size_t b = 0; b < k; ++b) {
        const Vec3& c = codebook.centers()[b];
        const double dm = std::sqrt(detail::dist2(u, c));
        const Vec3 s{u[0] + c[0], u[1] + c[1], u[2] + c[2]};
        const double dp = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
        angle[b] = 2.0 * std::atan2(dm, dp);
      }
      std::size_t first = 0;
      for (std::size_t b = 1; b < k; ++b)
        if (angle[b] < angle[first]) first = b;
      std::size_t second = first == 0 ? 1 : 0;
      for (std::size_t b = 0; b < k; ++b)
        if (b != first && angle[b] < angle[second]) second = b;
      if (!interpolate) {
        hist[t][first] += 1.0;
        continue;
      }
      const double to_second = angle[first] / (angle[first] + angle[second]);
      hist[t][second] += to_second;
      hist[t][first] += 1.0 - to_second;
    }
  }

  Matrix cd(l - stride, k);
  for (std::size_t t = 0; t + stride < l; ++t)
    for (std::size_t b = 0; b < k; ++b) cd(t, b) = hist[t + stride][b] - hist[t][b];
  return cd;
}

}  // namespace tubekit::oracle

#endif  // TUBEKIT_ORACLE_HPP
