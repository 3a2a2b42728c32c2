// tubekit - point tube pretext targets for point cloud videos
// Target bundles: the masked-tube targets of one video.
//
// Layout (little-endian):
//   "TBND"            4 bytes magic
//   version           u16, = 1
//   config_len        u32, then config_len bytes of canonical config text
//   seed              u64
//   K                 u32, then K x 3 f64 codebook centers
//   tube_count        u32 (all tubes, masked or not)
//   masked_count      u32
//   per masked tube, ascending tube index:
//     tube_index      u32
//     key_frame       u32
//     key_xyz         3 x f32
//     recon shape     u32 frames, u32 points, u32 dims (= 3), then f32 payload
//     cd shape        u32 rows, u32 cols, then f32 payload (0 x 0 without motion stream)

#ifndef TUBEKIT_BUNDLE_HPP
#define TUBEKIT_BUNDLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tubekit/binary.hpp"
#include "tubekit/config.hpp"
#include "tubekit/geometry.hpp"
#include "tubekit/tube_pipeline.hpp"
#include "tubekit/types.hpp"

namespace tubekit {

inline constexpr std::string_view kBundleMagic = "TBND";
inline constexpr std::uint16_t kBundleVersion = 1;

struct BundleEntry {
  std::uint32_t tube_index = 0;
  std::uint32_t key_frame = 0;
  Vec3 key_position{0, 0, 0};
  FrameStack recon;
  Matrix cd;

  friend bool operator==(const BundleEntry&, const BundleEntry&) = default;
};

// Payload values are held at f32 precision (widened to double) so an
// in-memory bundle equals its reloaded copy.
struct TargetBundle {
  std::string config_text;
  std::uint64_t seed = 0;
  std::vector<Vec3> codebook;
  std::uint32_t tube_count = 0;
  std::vector<BundleEntry> entries;

  PipelineConfig config() const { return parse_config_text(config_text); }
  DirectionCodebook direction_codebook() const { return DirectionCodebook::from_directions(codebook); }

  friend bool operator==(const TargetBundle&, const TargetBundle&) = default;
};

namespace detail {
inline double to_f32(double v) { return round_to_f32(v); }
}  // namespace detail

inline TargetBundle make_bundle(const TubeSetWithMask& set, const MaskedTargets& targets,
                                const PipelineConfig& cfg, const DirectionCodebook& codebook) {
  TargetBundle b;
  b.config_text = canonical_config_text(cfg);
  b.seed = cfg.seed;
  b.codebook = codebook.centers();
  b.tube_count = static_cast<std::uint32_t>(set.tubes.size());
  for (std::size_t e = 0; e < targets.tube_indices.size(); ++e) {
    const auto& tube = set.tubes[targets.tube_indices[e]];
    BundleEntry entry;
    entry.tube_index = static_cast<std::uint32_t>(targets.tube_indices[e]);
    entry.key_frame = static_cast<std::uint32_t>(tube.key_point.frame_index);
    for (int c = 0; c < 3; ++c) entry.key_position[c] = detail::to_f32(tube.key_point.position[c]);
    entry.recon = targets.recon[e];
    for (auto& p : entry.recon.flat())
      for (auto& c : p) c = detail::to_f32(c);
    if (!targets.motion.empty()) {
      entry.cd = targets.motion[e].cd;
      for (auto& v : entry.cd.flat()) v = detail::to_f32(v);
    }
    b.entries.push_back(std::move(entry));
  }
  return b;
}

/**
 * @brief Full target pipeline for one video: divide, mask, assemble.
 *
 * Deterministic in (video, cfg, codebook). cfg.seed drives key point
 * selection, neighbour sampling and masking through separate streams.
 */
inline TargetBundle build_targets(const PointCloudVideo& video, const PipelineConfig& cfg,
                                  const DirectionCodebook& codebook) {
  auto set = mask(divide(video, cfg), cfg.mask_ratio, cfg.seed);
  const auto targets = assemble_targets(set, cfg, codebook);
  return make_bundle(set, targets, cfg, codebook);
}

inline std::vector<char> encode_bundle(const TargetBundle& b) {
  ByteWriter w;
  w.bytes(kBundleMagic);
  w.u16(kBundleVersion);
  w.u32(static_cast<std::uint32_t>(b.config_text.size()));
  w.bytes(b.config_text);
  w.u64(b.seed);
  w.u32(static_cast<std::uint32_t>(b.codebook.size()));
  for (const auto& c : b.codebook)
    for (double v : c) w.f64(v);
  w.u32(b.tube_count);
  w.u32(static_cast<std::uint32_t>(b.entries.size()));
  for (const auto& e : b.entries) {
    w.u32(e.tube_index);
    w.u32(e.key_frame);
    for (double v : e.key_position) w.f32(static_cast<float>(v));
    w.u32(static_cast<std::uint32_t>(e.recon.frames()));
    w.u32(static_cast<std::uint32_t>(e.recon.points_per_frame()));
    w.u32(3);
    for (const auto& p : e.recon.flat())
      for (double v : p) w.f32(static_cast<float>(v));
    w.u32(static_cast<std::uint32_t>(e.cd.rows()));
    w.u32(static_cast<std::uint32_t>(e.cd.cols()));
    for (double v : e.cd.flat()) w.f32(static_cast<float>(v));
  }
  return w.take();
}

inline TargetBundle decode_bundle(const std::vector<char>& buf) {
  ByteReader r(buf);
  if (buf.size() < 4 || r.bytes(4) != kBundleMagic)
    throw ParseError(ParseError::Code::kBadMagic, "bad magic (expected TBND)");
  const std::uint16_t version = r.u16();
  if (version != kBundleVersion)
    throw ParseError(ParseError::Code::kVersionMismatch,
                     "version mismatch (file " + std::to_string(version) + ", expected 1)");
  TargetBundle b;
  b.config_text = r.bytes(r.u32());
  b.seed = r.u64();
  const std::uint32_t k = r.u32();
  r.need(static_cast<std::size_t>(k) * 24);
  b.codebook.resize(k);
  for (auto& c : b.codebook)
    for (auto& v : c) v = r.f64();
  b.tube_count = r.u32();
  const std::uint32_t masked = r.u32();
  if (masked > b.tube_count)
    throw ParseError(ParseError::Code::kMalformed, "masked count exceeds tube count");
  for (std::uint32_t i = 0; i < masked; ++i) {
    BundleEntry e;
    e.tube_index = r.u32();
    e.key_frame = r.u32();
    for (auto& v : e.key_position) v = r.f32();
    const std::uint32_t frames = r.u32(), points = r.u32(), dims = r.u32();
    if (dims != 3) throw ParseError(ParseError::Code::kMalformed, "recon target must have 3 dims");
    r.need_items(static_cast<std::size_t>(frames) * points, 12);
    e.recon = FrameStack(frames, points);
    for (auto& p : e.recon.flat())
      for (auto& v : p) v = r.f32();
    const std::uint32_t rows = r.u32(), cols = r.u32();
    r.need_items(static_cast<std::size_t>(rows) * cols, 4);
    e.cd = Matrix(rows, cols);
    for (auto& v : e.cd.flat()) v = r.f32();
    b.entries.push_back(std::move(e));
  }
  if (r.remaining() != 0)
    throw ParseError(ParseError::Code::kTrailingData, "trailing bytes after bundle");
  return b;
}

inline TargetBundle read_bundle(const std::string& path) { return decode_bundle(read_file_bytes(path)); }

inline void write_bundle(const TargetBundle& b, const std::string& path) {
  write_file_bytes(path, encode_bundle(b));
}

}  // namespace tubekit

#endif  // TUBEKIT_BUNDLE_HPP
