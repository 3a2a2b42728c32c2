// tubekit - point tube pretext targets for point cloud videos
// Little-endian byte encoding shared by the file formats.

#ifndef TUBEKIT_BINARY_HPP
#define TUBEKIT_BINARY_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tubekit {

struct ParseError : std::runtime_error {
  enum class Code { kBadMagic, kVersionMismatch, kTruncatedPayload, kTrailingData, kMalformed, kIo };

  ParseError(Code code, const std::string& what) : std::runtime_error(what), code(code) {}

  Code code;
};

class ByteWriter {
 public:
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  const std::vector<char>& data() const noexcept { return buf_; }
  std::vector<char> take() noexcept { return std::move(buf_); }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::vector<char> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<char>& buf) : buf_(buf) {}

  std::string bytes(std::size_t n) {
    need(n);
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::size_t remaining() const noexcept { return buf_.size() - pos_; }
  void need(std::size_t n) const {
    if (remaining() < n) throw ParseError(ParseError::Code::kTruncatedPayload, "truncated payload");
  }
  // need(count * width) without overflowing the product.
  void need_items(std::size_t count, std::size_t width) const {
    if (count > remaining() / width)
      throw ParseError(ParseError::Code::kTruncatedPayload, "truncated payload");
  }

 private:
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  const std::vector<char>& buf_;
  std::size_t pos_ = 0;
};

inline std::vector<char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseError::Code::kIo, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::string& path, const std::vector<char>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(ParseError::Code::kIo, "cannot write '" + path + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw ParseError(ParseError::Code::kIo, "write failed for '" + path + "'");
}

}  // namespace tubekit

#endif  // TUBEKIT_BINARY_HPP
