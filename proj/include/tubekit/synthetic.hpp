// tubekit - point tube pretext targets for point cloud videos
// Seeded synthetic body-like videos for tests and demos.

#ifndef TUBEKIT_SYNTHETIC_HPP
#define TUBEKIT_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tubekit/rng.hpp"
#include "tubekit/types.hpp"

namespace tubekit {

enum class MotionKind { kStatic, kTranslate, kRaise, kLower, kKick };

inline std::string_view to_string(MotionKind k) {
  switch (k) {
    case MotionKind::kStatic: return "static";
    case MotionKind::kTranslate: return "translate";
    case MotionKind::kRaise: return "raise";
    case MotionKind::kLower: return "lower";
    case MotionKind::kKick: return "kick";
  }
  return "static";
}

inline MotionKind parse_motion_kind(std::string_view s) {
  if (s == "static") return MotionKind::kStatic;
  if (s == "translate") return MotionKind::kTranslate;
  if (s == "raise") return MotionKind::kRaise;
  if (s == "lower") return MotionKind::kLower;
  if (s == "kick") return MotionKind::kKick;
  throw InputError("unknown synthetic kind '" + std::string(s) + "'");
}

// Motion amplitudes of the generated clips.
struct SyntheticMotion {
  double translate_per_frame = 0.05;  // meters along +x
  double raise_angle = 0.9 * std::numbers::pi;
  double kick_angle = 1.3;
};

namespace detail {

enum class BodyPart : std::uint8_t { kTorso, kHead, kLeftArm, kRightArm, kLeftLeg, kRightLeg };

struct BodySample {
  BodyPart part;
  Vec3 local;   // torso/head: absolute rest position; limbs: jitter
  double along; // limbs: position along the limb in [0, 1]
};

inline Vec3 in_ball(CounterRng& rng, double radius) {
  for (;;) {
    const Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (vec::squared_norm(v) <= 1.0) return vec::scale(v, radius);
  }
}

// Pose: arm elevation (0 = hanging, pi = overhead) and right-leg swing
// (0 = straight down, positive = forward along +y).
inline Vec3 place(const BodySample& s, double arm_angle, double leg_angle) {
  constexpr double kArmLength = 0.6, kLegLength = 0.9;
  switch (s.part) {
    case BodyPart::kTorso:
    case BodyPart::kHead:
      return s.local;
    case BodyPart::kLeftArm:
    case BodyPart::kRightArm: {
      const double side = s.part == BodyPart::kRightArm ? 1.0 : -1.0;
      const Vec3 shoulder{side * 0.22, 0.0, 1.45};
      const Vec3 dir{side * std::sin(arm_angle), 0.0, -std::cos(arm_angle)};
      return vec::add(vec::add(shoulder, vec::scale(dir, s.along * kArmLength)), s.local);
    }
    case BodyPart::kLeftLeg:
    case BodyPart::kRightLeg: {
      const double side = s.part == BodyPart::kRightLeg ? 1.0 : -1.0;
      const double swing = s.part == BodyPart::kRightLeg ? leg_angle : 0.0;
      const Vec3 hip{side * 0.1, 0.0, 0.9};
      const Vec3 dir{0.0, std::sin(swing), -std::cos(swing)};
      return vec::add(vec::add(hip, vec::scale(dir, s.along * kLegLength)), s.local);
    }
  }
  return s.local;
}

inline std::vector<BodySample> sample_body(std::size_t points, std::uint64_t seed) {
  CounterRng rng(CounterRng::derive_key(seed, {stream::kSynthetic}));
  std::vector<BodySample> body(points);
  for (std::size_t i = 0; i < points; ++i) {
    // 40% torso, 10% head, 12.5% per limb, assigned round-robin by slot.
    const std::size_t slot = i % 40;
    BodySample s{};
    if (slot < 16) {
      s.part = BodyPart::kTorso;
      const Vec3 u = in_ball(rng, 1.0);
      s.local = {0.18 * u[0], 0.10 * u[1], 1.2 + 0.30 * u[2]};
    } else if (slot < 20) {
      s.part = BodyPart::kHead;
      s.local = vec::add(Vec3{0.0, 0.0, 1.62}, in_ball(rng, 0.1));
    } else {
      s.part = static_cast<BodyPart>(2 + (slot - 20) / 5);
      s.along = rng.uniform01();
      s.local = in_ball(rng, s.part <= BodyPart::kRightArm ? 0.04 : 0.05);
    }
    body[i] = s;
  }
  return body;
}

inline Vec3 round_to_f32(const Vec3& v) {
  return {tubekit::round_to_f32(v[0]), tubekit::round_to_f32(v[1]), tubekit::round_to_f32(v[2])};
}

}  // namespace detail

/**
 * @brief Seeded body-like clip of `frames` x `points` points.
 *
 * The body layout depends only on `seed`; each kind animates it:
 * static repeats the rest pose, translate slides it along +x, raise lifts
 * both arms overhead, lower is raise played backwards frame for frame,
 * kick swings the right leg forward and back. Coordinates are rounded to
 * f32 so a clip survives a PCVD round trip unchanged.
 */
inline PointCloudVideo gen_synthetic(MotionKind kind, std::size_t frames, std::size_t points,
                                     std::uint64_t seed, const SyntheticMotion& motion = {}) {
  if (frames < 3) throw InputError("gen_synthetic: frames must be >= 3");
  if (points < 64) throw InputError("gen_synthetic: points must be >= 64");
  if (kind == MotionKind::kLower) {
    auto raise = gen_synthetic(MotionKind::kRaise, frames, points, seed, motion);
    std::reverse(raise.frames.begin(), raise.frames.end());
    return PointCloudVideo::from_frames(std::move(raise.frames));
  }
  const auto body = detail::sample_body(points, seed);
  const double last = static_cast<double>(frames - 1);

  std::vector<Frame> out(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double phase = static_cast<double>(t) / last;
    double arm = 0.0, leg = 0.0;
    Vec3 shift{0, 0, 0};
    switch (kind) {
      case MotionKind::kStatic: break;
      case MotionKind::kTranslate:
        shift[0] = motion.translate_per_frame * static_cast<double>(t);
        break;
      case MotionKind::kRaise: arm = motion.raise_angle * phase; break;
      case MotionKind::kLower: break;
      case MotionKind::kKick: leg = motion.kick_angle * std::sin(std::numbers::pi * phase); break;
    }
    out[t].points.reserve(points);
    for (const auto& s : body)
      out[t].points.push_back(detail::round_to_f32(vec::add(detail::place(s, arm, leg), shift)));
  }
  return PointCloudVideo::from_frames(std::move(out));
}

}  // namespace tubekit

#endif  // TUBEKIT_SYNTHETIC_HPP
