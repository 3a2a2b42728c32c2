// tubekit - point tube pretext targets for point cloud videos
// PCVD point cloud video files.
//
// Layout (little-endian):
//   "PCVD"              4 bytes magic
//   version             u16, = 1
//   frame_count         u32
//   points_per_frame    u32; 0 means variable, followed by frame_count u32 counts
//   payload             f32 x, y, z triples, frame-major

#ifndef TUBEKIT_PCV_IO_HPP
#define TUBEKIT_PCV_IO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tubekit/binary.hpp"
#include "tubekit/types.hpp"

namespace tubekit {

inline constexpr std::string_view kPcvMagic = "PCVD";
inline constexpr std::uint16_t kPcvVersion = 1;

inline std::vector<char> encode_pcv(const PointCloudVideo& video) {
  ByteWriter w;
  w.bytes(kPcvMagic);
  w.u16(kPcvVersion);
  w.u32(static_cast<std::uint32_t>(video.frame_count()));
  bool uniform = !video.frames.empty() && video.frames[0].size() > 0;
  for (const auto& f : video.frames) uniform = uniform && f.size() == video.frames[0].size();
  if (uniform) {
    w.u32(static_cast<std::uint32_t>(video.frames[0].size()));
  } else {
    w.u32(0);
    for (const auto& f : video.frames) w.u32(static_cast<std::uint32_t>(f.size()));
  }
  for (const auto& f : video.frames)
    for (const auto& p : f.points)
      for (double c : p) w.f32(static_cast<float>(c));
  return w.take();
}

inline PointCloudVideo decode_pcv(const std::vector<char>& buf) {
  ByteReader r(buf);
  if (buf.size() < 4 || r.bytes(4) != kPcvMagic)
    throw ParseError(ParseError::Code::kBadMagic, "bad magic (expected PCVD)");
  const std::uint16_t version = r.u16();
  if (version != kPcvVersion)
    throw ParseError(ParseError::Code::kVersionMismatch,
                     "version mismatch (file " + std::to_string(version) + ", expected 1)");
  const std::uint32_t frames = r.u32();
  const std::uint32_t ppf = r.u32();
  // Sizes are checked against the buffer before anything is allocated.
  std::size_t total = static_cast<std::size_t>(frames) * ppf;
  if (ppf == 0) r.need(static_cast<std::size_t>(frames) * 4);
  else r.need_items(total, 12);
  std::vector<std::uint32_t> counts(frames, ppf);
  if (ppf == 0) {
    total = 0;
    for (auto& c : counts) total += (c = r.u32());
  }
  r.need_items(total, 12);
  if (r.remaining() > total * 12)
    throw ParseError(ParseError::Code::kTrailingData, "trailing bytes after payload");

  std::vector<Frame> out(frames);
  for (std::uint32_t t = 0; t < frames; ++t) {
    out[t].points.resize(counts[t]);
    for (auto& p : out[t].points) {
      const float x = r.f32(), y = r.f32(), z = r.f32();
      p = {x, y, z};
    }
  }
  return PointCloudVideo::from_frames(std::move(out));
}

inline PointCloudVideo read_pcv(const std::string& path) { return decode_pcv(read_file_bytes(path)); }

inline void write_pcv(const PointCloudVideo& video, const std::string& path) {
  write_file_bytes(path, encode_pcv(video));
}

// Wraps a dense (frames, points, 3) row-major buffer as a video. Values
// are not rounded; float buffers widen exactly.
template <typename Scalar>
PointCloudVideo video_from_buffer(std::span<const Scalar> data, std::size_t frames,
                                  std::size_t points) {
  if (frames == 0) throw InputError("video buffer has zero frames");
  if (points == 0) throw InputError("video buffer has zero points per frame");
  if (data.size() != frames * points * 3)
    throw InputError("video buffer size " + std::to_string(data.size()) + " does not match shape (" +
                     std::to_string(frames) + ", " + std::to_string(points) + ", 3)");
  std::vector<Frame> out(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    out[t].points.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
      const std::size_t o = (t * points + i) * 3;
      out[t].points[i] = {static_cast<double>(data[o]), static_cast<double>(data[o + 1]),
                          static_cast<double>(data[o + 2])};
    }
  }
  return PointCloudVideo::from_frames(std::move(out));
}

}  // namespace tubekit

#endif  // TUBEKIT_PCV_IO_HPP
