// tubekit - point tube pretext targets for point cloud videos
// Canonical text form of PipelineConfig and codebook files.
//
// One `key = value` pair per line, keys sorted, doubles printed with 17
// significant digits. Byte-equal text means equal configs.

#ifndef TUBEKIT_CONFIG_HPP
#define TUBEKIT_CONFIG_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "tubekit/geometry.hpp"
#include "tubekit/tube_pipeline.hpp"

namespace tubekit {

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw InputError("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw InputError("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InputError("config: '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace detail

inline std::string sections_to_string(std::size_t sections) {
  return sections == 0 ? "custom" : std::to_string(sections);
}

inline std::size_t parse_sections(const std::string& v) {
  if (v == "custom") return 0;
  const auto k = detail::parse_u64("sections", v);
  if (k != 4 && k != 8 && k != 16)
    throw InputError("sections must be 4, 8, 16 or custom, got '" + v + "'");
  return static_cast<std::size_t>(k);
}

inline std::string canonical_config_text(const PipelineConfig& c) {
  std::map<std::string, std::string> kv{
      {"cd_normalize", c.cd_normalize ? "true" : "false"},
      {"cd_stride", std::to_string(c.cd_stride)},
      {"interpolate", c.interpolate ? "true" : "false"},
      {"mask_ratio", detail::format_double(c.mask_ratio)},
      {"motion_stream", c.motion_stream ? "true" : "false"},
      {"motion_weight", detail::format_double(c.motion_weight)},
      {"neighbors", std::to_string(c.neighbors)},
      {"radius", detail::format_double(c.radius)},
      {"recon_mode", std::string(to_string(c.recon_mode))},
      {"sections", sections_to_string(c.sections)},
      {"seed", std::to_string(c.seed)},
      {"spatial_downsample", std::to_string(c.spatial_downsample)},
      {"temporal_downsample", std::to_string(c.temporal_downsample)},
      {"tube_frames", std::to_string(c.tube_frames)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

// Applies `key = value` lines onto `base`. Blank lines and lines starting
// with '#' are skipped; unknown keys are errors.
inline PipelineConfig parse_config_text(std::string_view text, PipelineConfig base = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = detail::trim(std::string_view(s).substr(0, eq));
    const auto val = detail::trim(std::string_view(s).substr(eq + 1));
    if (key == "cd_normalize") base.cd_normalize = detail::parse_bool(key, val);
    else if (key == "cd_stride") base.cd_stride = detail::parse_u64(key, val);
    else if (key == "interpolate") base.interpolate = detail::parse_bool(key, val);
    else if (key == "mask_ratio") base.mask_ratio = detail::parse_double(key, val);
    else if (key == "motion_stream") base.motion_stream = detail::parse_bool(key, val);
    else if (key == "motion_weight") base.motion_weight = detail::parse_double(key, val);
    else if (key == "neighbors") base.neighbors = detail::parse_u64(key, val);
    else if (key == "radius") base.radius = detail::parse_double(key, val);
    else if (key == "recon_mode") base.recon_mode = parse_recon_mode(val);
    else if (key == "sections") base.sections = parse_sections(val);
    else if (key == "seed") base.seed = detail::parse_u64(key, val);
    else if (key == "spatial_downsample") base.spatial_downsample = detail::parse_u64(key, val);
    else if (key == "temporal_downsample") base.temporal_downsample = detail::parse_u64(key, val);
    else if (key == "tube_frames") base.tube_frames = detail::parse_u64(key, val);
    else throw InputError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return base;
}

inline PipelineConfig read_config(const std::string& path, PipelineConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), base);
}

// Codebook text: one "x y z" direction per line, '#' comments.
inline DirectionCodebook parse_codebook_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Vec3> dirs;
  while (std::getline(in, line)) {
    const auto s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream ls(s);
    Vec3 d{};
    if (!(ls >> d[0] >> d[1] >> d[2])) throw InputError("codebook: expected 'x y z', got '" + s + "'");
    std::string rest;
    if (ls >> rest) throw InputError("codebook: trailing text on line '" + s + "'");
    dirs.push_back(d);
  }
  return DirectionCodebook::from_directions(dirs);
}

inline DirectionCodebook read_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open codebook '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_codebook_text(ss.str());
}

}  // namespace tubekit

#endif  // TUBEKIT_CONFIG_HPP
