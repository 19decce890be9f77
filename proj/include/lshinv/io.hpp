#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "lshinv/errors.hpp"

namespace lshinv {

/// Little-endian byte sink. Serialization builds the full byte string in
/// memory so artifacts can be compared byte-for-byte without touching disk.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void bytes(std::string_view b) { buf_.append(b.data(), b.size()); }

  const std::string& str() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>(v >> (8 * i)));
  }
  std::string buf_;
};

/// Little-endian cursor over a byte buffer. Every read is bounds-checked and
/// reports the offset of the failure.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  std::string_view bytes(std::size_t n) {
    need(n);
    std::string_view out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  void expect_magic(std::string_view magic, const std::string& what) {
    std::size_t at = pos_;
    if (remaining() < magic.size() || data_.substr(pos_, magic.size()) != magic)
      throw FormatError("bad magic, not a " + what + " file", at);
    pos_ += magic.size();
  }

  void expect_end(const std::string& what) {
    if (pos_ != data_.size())
      throw FormatError("trailing bytes after " + what + " payload", pos_);
  }

 private:
  void need(std::size_t n) {
    if (remaining() < n) throw FormatError("truncated data", pos_);
  }
  std::uint64_t get_le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

}  // namespace lshinv
