#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "semnav/core/error.hpp"

namespace semnav {

/** Little-endian binary writer over an in-memory buffer. */
class BinWriter {
 public:
  void magic(const char tag[4]) { buf_.insert(buf_.end(), tag, tag + 4); }
  void u16(uint16_t v) {
    buf_.push_back(uint8_t(v & 0xff));
    buf_.push_back(uint8_t(v >> 8));
  }
  void u8(uint8_t v) { buf_.push_back(v); }
  void f32(float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    for (int i = 0; i < 4; ++i) buf_.push_back(uint8_t((bits >> (8 * i)) & 0xff));
  }
  void bytes(const uint8_t* p, size_t n) { buf_.insert(buf_.end(), p, p + n); }

  const std::vector<uint8_t>& buffer() const { return buf_; }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(buf_.data()), std::streamsize(buf_.size()));
    if (!f) throw Error("write failed: " + path);
  }

 private:
  std::vector<uint8_t> buf_;
};

/** Little-endian binary reader with bounds checking. */
class BinReader {
 public:
  explicit BinReader(std::vector<uint8_t> data) : buf_(std::move(data)) {}

  static BinReader from_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw Error("cannot open for reading: " + path);
    auto n = f.tellg();
    f.seekg(0);
    auto data = std::vector<uint8_t>(size_t(n));
    f.read(reinterpret_cast<char*>(data.data()), n);
    if (!f) throw Error("read failed: " + path);
    return BinReader(std::move(data));
  }

  void expect_magic(const char tag[4]) {
    need(4);
    if (std::memcmp(buf_.data() + pos_, tag, 4) != 0)
      throw ParseError(std::string("bad magic, expected '") + std::string(tag, 4) + "'",
                       long(pos_));
    pos_ += 4;
  }
  uint16_t u16() {
    need(2);
    uint16_t v = uint16_t(buf_[pos_]) | uint16_t(buf_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }
  uint8_t u8() {
    need(1);
    return buf_[pos_++];
  }
  float f32() {
    need(4);
    uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= uint32_t(buf_[pos_ + i]) << (8 * i);
    pos_ += 4;
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  void bytes(uint8_t* out, size_t n) {
    need(n);
    std::memcpy(out, buf_.data() + pos_, n);
    pos_ += n;
  }
  size_t remaining() const { return buf_.size() - pos_; }
  size_t offset() const { return pos_; }

 private:
  void need(size_t n) const {
    if (pos_ + n > buf_.size()) throw ParseError("truncated data", long(pos_));
  }
  std::vector<uint8_t> buf_;
  size_t pos_ = 0;
};

}  // namespace semnav
